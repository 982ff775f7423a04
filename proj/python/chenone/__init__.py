# python/chenone/__init__.py

# Copyright 2026  The chenone authors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.


"""Graphemic lexicons, decision-tree state tying, GMM-HMM training and decoding."""

from ._chenone import (
    ChenoneError,
    NGramLm,
    Recognizer,
    ablate,
    align_words,
    build_lexicon,
    cer,
    extract_tagged_segments,
    load_arpa,
    normalize_word,
    read_features,
    read_report,
    run,
    select_rare_words,
    single_gauss_loglik,
    wer,
    word_to_units,
    write_features,
)

__all__ = [
    "ChenoneError",
    "NGramLm",
    "Recognizer",
    "ablate",
    "align_words",
    "build_lexicon",
    "cer",
    "extract_tagged_segments",
    "load_arpa",
    "normalize_word",
    "read_features",
    "read_report",
    "run",
    "select_rare_words",
    "single_gauss_loglik",
    "wer",
    "word_to_units",
    "write_features",
]
