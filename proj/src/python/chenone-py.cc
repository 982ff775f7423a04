// src/python/chenone-py.cc

// Copyright 2026  The chenone authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chenone/acoustic-model.h"
#include "chenone/arpa-lm.h"
#include "chenone/decoder.h"
#include "chenone/error.h"
#include "chenone/eval.h"
#include "chenone/features.h"
#include "chenone/pipeline.h"
#include "chenone/prefix-tree.h"
#include "chenone/tree.h"
#include "chenone/units.h"

namespace py = pybind11;
using namespace chenone;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

Matrix ToMatrix(const FloatArray &a) {
  if (a.ndim() != 2) throw py::value_error("features must be a 2-d array");
  Matrix m(static_cast<int32_t>(a.shape(0)), static_cast<int32_t>(a.shape(1)));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = r(i, j);
  return m;
}

py::array_t<float> ToArray(const Matrix &m) {
  py::array_t<float> a({m.NumRows(), m.NumCols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

CaseMode CaseArg(const std::string &name) {
  auto mode = ParseCaseMode(name);
  if (!mode) throw py::value_error("case must be 'preserve' or 'lowercase'");
  return *mode;
}

std::vector<std::string> UnitNames(const std::vector<UnitId> &ids, const UnitInventory &inv) {
  std::vector<std::string> out;
  for (UnitId id : ids) out.push_back(inv.UnitName(id));
  return out;
}

const char *EditName(EditType t) {
  switch (t) {
    case EditType::kMatch: return "match";
    case EditType::kSubstitution: return "sub";
    case EditType::kDeletion: return "del";
    case EditType::kInsertion: return "ins";
  }
  return "?";
}

PipelineConfig MakeConfig(const std::string &path, const std::vector<std::string> &overrides,
                          std::optional<std::string> out, std::optional<uint64_t> seed) {
  PipelineConfig config = LoadPipelineConfig(path, overrides);
  if (out) config.out = *out;
  if (seed) config.seed = *seed;
  return config;
}

py::dict SummaryDict(const StageSummary &s) {
  py::dict d;
  d["stage"] = s.stage;
  d["outputs"] = s.outputs;
  d["notes"] = s.notes;
  return d;
}

// everything needed to decode against a trained experiment directory
struct Recognizer {
  PipelineConfig config;
  UnitInventory inventory;
  Lexicon lexicon;
  AcousticModel model;
  NGramLm lm;
  PrefixTree tree;

  explicit Recognizer(PipelineConfig c)
      : config(std::move(c)),
        inventory(LoadInventory(config)),
        lexicon(ReadLexiconFile(config.OutPath(kLexiconFile), inventory, LexiconSourceOf(config))),
        model(AcousticModel::ReadFile(config.OutPath(kModelFile),
                                      TiedStateMap::ReadFile(config.OutPath(kTreeFile), inventory))),
        lm(LoadArpa(config.LmPath())),
        tree(BuildPrefixTree(lexicon, model.tied_map, config.cd)) {}
};

}  // namespace

PYBIND11_MODULE(_chenone, m) {
  m.doc() = "chenone graphemic acoustic modeling toolkit";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc;
  exc.call_once_and_store_result([&]() {
    return py::object(py::exception<Error>(m, "ChenoneError"));
  });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error &e) {
      py::object type = exc.get_stored();
      py::object err = type(e.what());
      err.attr("code") = ErrorCodeName(e.code());
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  // units
  m.def("normalize_word", [](const std::string &w, const std::string &c) {
    return NormalizeWord(w, UnitInventory::Graphemic(CaseArg(c)));
  }, py::arg("word"), py::arg("case") = "preserve");
  m.def("word_to_units", [](const std::string &w, const std::string &c) {
    UnitInventory inv = UnitInventory::Graphemic(CaseArg(c));
    return UnitNames(WordToUnits(w, inv), inv);
  }, py::arg("word"), py::arg("case") = "preserve");
  m.def("build_lexicon", [](const std::vector<std::string> &words, const std::string &c) {
    UnitInventory inv = UnitInventory::Graphemic(CaseArg(c));
    std::vector<std::string> skipped;
    Lexicon lex = BuildLexicon(words, inv, &skipped);
    std::ostringstream os;
    lex.Write(os, inv);
    return py::make_tuple(os.str(), skipped);
  }, py::arg("words"), py::arg("case") = "preserve",
     "Returns (lexicon text, words dropped by normalization).");

  // tree
  m.def("single_gauss_loglik", [](double count, std::vector<double> sum, std::vector<double> sum_sq,
                                  double floor) {
    GaussStats s;
    s.count = count;
    s.sum = std::move(sum);
    s.sum_sq = std::move(sum_sq);
    return SingleGaussLogLik(s, floor);
  }, py::arg("count"), py::arg("sum"), py::arg("sum_sq"), py::arg("variance_floor") = kVarianceFloor);

  // features
  m.def("read_features", [](const std::string &path) { return ToArray(ReadFeaturesFile(path)); });
  m.def("write_features", [](const std::string &path, const FloatArray &a) {
    WriteFeaturesFile(path, ToMatrix(a));
  });

  // lm
  py::class_<NGramLm>(m, "NGramLm")
      .def_property_readonly("order", &NGramLm::order)
      .def_property_readonly("vocabulary", &NGramLm::vocabulary)
      .def("num_ngrams", &NGramLm::NumNGrams)
      .def("log10_prob", [](const NGramLm &lm, const std::vector<std::string> &history,
                            const std::string &word) { return lm.Log10Prob(history, word); })
      .def("sentence_log10_prob", [](const NGramLm &lm, const std::vector<std::string> &words) {
        return lm.SentenceLog10Prob(words);
      });
  m.def("load_arpa", &LoadArpa);

  // eval
  m.def("align_words", [](const std::vector<std::string> &ref, const std::vector<std::string> &hyp) {
    std::vector<py::tuple> out;
    for (const EditOp &op : AlignWords(ref, hyp))
      out.push_back(py::make_tuple(EditName(op.type), op.ref, op.hyp));
    return out;
  });
  m.def("wer", [](const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> &pairs) {
    std::vector<std::vector<EditOp>> alignments;
    for (const auto &[r, h] : pairs) alignments.push_back(AlignWords(r, h));
    WerReport rep = ComputeWer(alignments);
    py::dict d;
    d["wer"] = rep.Rate();
    d["sub"] = rep.substitutions;
    d["del"] = rep.deletions;
    d["ins"] = rep.insertions;
    d["ref_words"] = rep.reference_length;
    return d;
  }, "Corpus WER over (reference, hypothesis) word-list pairs.");
  m.def("cer", [](const std::vector<std::pair<std::string, std::string>> &segments, bool count_spaces) {
    std::vector<SegmentPair> segs;
    for (const auto &[r, h] : segments) segs.push_back({r, h});
    return ComputeCer(segs, count_spaces);
  }, py::arg("segments"), py::arg("count_spaces") = true);
  m.def("extract_tagged_segments", [](const std::vector<std::string> &ref, const std::vector<std::string> &hyp,
                                      const std::vector<std::tuple<int32_t, int32_t, std::string>> &spans) {
    std::vector<TagSpan> tags;
    for (const auto &[b, e, label] : spans) {
      auto l = ParseTagLabel(label);
      if (!l) throw py::value_error("unknown tag label " + label);
      tags.push_back({"utt", b, e, *l});
    }
    std::vector<py::tuple> out;
    for (const SegmentPair &s : ExtractTaggedSegments(ref, hyp, AlignWords(ref, hyp), tags))
      out.push_back(py::make_tuple(s.ref, s.hyp));
    return out;
  });
  m.def("select_rare_words", [](const std::map<std::string, int64_t> &counts, double threshold,
                                const std::string &mode) {
    if (mode != "type" && mode != "token") throw py::value_error("mode must be 'type' or 'token'");
    return SelectRareWords(counts, threshold, mode == "type" ? RareWordMode::kType : RareWordMode::kToken);
  }, py::arg("counts"), py::arg("threshold") = 0.8, py::arg("mode") = "type");

  // pipeline
  m.def("run", [](const std::string &config, const std::vector<std::string> &set,
                  std::optional<std::string> out, std::optional<uint64_t> seed) {
    std::vector<StageSummary> summaries;
    {
      py::gil_scoped_release release;
      summaries = CmdRun(MakeConfig(config, set, out, seed));
    }
    py::list stages;
    for (const StageSummary &s : summaries) stages.append(SummaryDict(s));
    return stages;
  }, py::arg("config") = "", py::arg("set") = std::vector<std::string>{},
     py::arg("out") = py::none(), py::arg("seed") = py::none());
  m.def("ablate", [](const std::string &config, const std::vector<std::string> &set,
                     std::optional<std::string> out, std::optional<uint64_t> seed) {
    std::vector<AblationCell> cells;
    {
      py::gil_scoped_release release;
      cells = CmdAblate(MakeConfig(config, set, out, seed));
    }
    py::list rows;
    for (const AblationCell &c : cells) {
      py::dict d;
      d["cd"] = c.context_dependent;
      d["pd"] = c.position_dependent;
      d["case"] = CaseModeName(c.case_mode);
      d["wer"] = c.wer ? py::cast(*c.wer) : py::none();
      d["error"] = c.error;
      rows.append(d);
    }
    return rows;
  }, py::arg("config") = "", py::arg("set") = std::vector<std::string>{},
     py::arg("out") = py::none(), py::arg("seed") = py::none());
  m.def("read_report", &ReadReport);

  py::class_<Recognizer>(m, "Recognizer")
      .def(py::init([](const std::string &config, const std::vector<std::string> &set,
                       std::optional<std::string> out) {
        return std::make_unique<Recognizer>(MakeConfig(config, set, out, std::nullopt));
      }), py::arg("config") = "", py::arg("set") = std::vector<std::string>{}, py::arg("out") = py::none())
      .def_property_readonly("num_pdfs", [](const Recognizer &r) { return r.model.NumPdfs(); })
      .def_property_readonly("dim", [](const Recognizer &r) { return r.model.dim; })
      .def("decode", [](const Recognizer &r, const FloatArray &feats) {
        Matrix m = ToMatrix(feats);
        DecodeResult res;
        {
          py::gil_scoped_release release;
          res = Decode(m, r.model, r.tree, r.lm, r.config.decode);
        }
        py::dict d;
        d["words"] = res.words;
        d["total"] = res.total;
        d["acoustic"] = res.acoustic;
        d["lm_log10"] = res.lm_log10;
        return d;
      });
}
