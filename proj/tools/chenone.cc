// tools/chenone.cc

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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "chenone/error.h"
#include "chenone/pipeline.h"

namespace {

void Print(const chenone::StageSummary &summary) {
  for (const auto &note : summary.notes) std::cerr << summary.stage << ": " << note << '\n';
  for (const auto &out : summary.outputs) std::cerr << summary.stage << ": wrote " << out << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Context- and position-dependent grapheme acoustic modeling toolkit"};
  app.require_subcommand(0, 1);
  app.allow_extras();
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  long long seed = -1;
  int jobs = 0;
  std::string out;
  app.add_option("--config", config_path, "key = value config file with [section] headers");
  app.add_option("--seed", seed, "random seed (run.seed)");
  app.add_option("--jobs", jobs, "worker threads (run.jobs)");
  app.add_option("--out", out, "output directory (data.out)");
  app.add_option("--set", overrides, "override a setting, section.key=value")
      ->type_name("KEY=VALUE");

  struct Command {
    const char *name;
    const char *help;
  };
  const std::vector<Command> commands = {
      {"synth", "generate a synthetic corpus"},
      {"lexicon", "build the lexicon"},
      {"align", "flat start, bootstrap EM and align the training data"},
      {"stats", "accumulate tri-context statistics from alignments"},
      {"tree", "grow the state-tying decision trees"},
      {"train", "retie and train the tied-state model"},
      {"decode", "decode the test split"},
      {"score", "score hypotheses (WER, proper-noun and rare-word CER)"},
      {"ablate", "run the CD x PD grid and write ablation.txt"},
      {"run", "run every stage from lexicon to score"},
  };
  for (const auto &c : commands) app.add_subcommand(c.name, c.help);

  CLI11_PARSE(app, argc, argv);
  if (!app.remaining().empty()) {
    std::cerr << "unknown subcommand or argument '" << app.remaining().front()
              << "'\nRun with --help for more information.\n";
    return 2;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << "a subcommand is required\nRun with --help for more information.\n";
    return 2;
  }

  try {
    chenone::PipelineConfig config = chenone::LoadPipelineConfig(config_path, overrides);
    if (seed >= 0) config.seed = static_cast<uint64_t>(seed);
    if (jobs > 0) config.jobs = jobs;
    if (!out.empty()) config.out = out;

    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "synth") Print(chenone::CmdSynth(config));
    else if (cmd == "lexicon") Print(chenone::CmdLexicon(config));
    else if (cmd == "align") Print(chenone::CmdAlign(config));
    else if (cmd == "stats") Print(chenone::CmdStats(config));
    else if (cmd == "tree") Print(chenone::CmdTree(config));
    else if (cmd == "train") Print(chenone::CmdTrain(config));
    else if (cmd == "decode") Print(chenone::CmdDecode(config));
    else if (cmd == "score") Print(chenone::CmdScore(config));
    else if (cmd == "run") {
      for (const auto &s : chenone::CmdRun(config)) Print(s);
    } else if (cmd == "ablate") {
      for (const auto &cell : chenone::CmdAblate(config)) {
        std::cout << "CD=" << (cell.context_dependent ? 'Y' : 'N')
                  << " PD=" << (cell.position_dependent ? 'Y' : 'N')
                  << " case=" << chenone::CaseModeName(cell.case_mode) << ' ';
        if (cell.wer) {
          std::printf("WER=%.1f\n", *cell.wer);
          std::fflush(stdout);
        } else {
          std::cout << "failed: " << cell.error << '\n';
        }
      }
    }
  } catch (const chenone::Error &e) {
    std::cerr << "chenone: " << e.what() << '\n';
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "chenone: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
