// Copyright 2026 The VEAT Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// veat-synth: writes a seeded synthetic embedding archive, either for an
// explicit concept list or for every concept a battery config references.

#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "veat/archive.hpp"
#include "veat/battery.hpp"
#include "veat/errors.hpp"
#include "veat/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Write a synthetic embedding archive", "veat-synth"};
  std::vector<std::string> concepts;
  std::string battery, output;
  std::size_t extra = 0;
  veat::SyntheticOptions options;
  app.add_option("--concept", concepts, "Concept name (repeatable)");
  app.add_option("--from-battery", battery, "Take concept names from a battery config");
  app.add_option("--extra", extra, "Additional unreferenced filler concepts")->capture_default_str();
  app.add_option("--seed", options.seed, "Generator seed")->capture_default_str();
  app.add_option("--dim", options.dim, "Embedding dimension")->capture_default_str();
  app.add_option("--members", options.members, "Videos per concept")->capture_default_str();
  app.add_option("--n-frames", options.n_frames, "Recorded frame count")->capture_default_str();
  app.add_option("--noise", options.noise, "Per-coordinate noise sd")->capture_default_str();
  std::vector<std::string> planted;
  app.add_option("--plant", planted, "Plant an association: TARGET=ATTRIBUTE[:WEIGHT]");
  app.add_option("--output", output, "Archive to write")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& spec : planted) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) throw veat::ValidationError("bad --plant '" + spec + "'");
      veat::PlantedAssociation p;
      p.target = spec.substr(0, eq);
      std::string rest = spec.substr(eq + 1);
      if (const auto colon = rest.rfind(':'); colon != std::string::npos) {
        p.weight = std::stod(rest.substr(colon + 1));
        rest.resize(colon);
      }
      p.attribute = rest;
      options.planted.push_back(std::move(p));
    }
    std::set<std::string> names(concepts.begin(), concepts.end());
    if (!battery.empty()) {
      for (auto& c : veat::referenced_concepts(veat::read_battery_config(battery))) names.insert(c);
    }
    for (std::size_t i = 1; i <= extra; ++i) names.insert(fmt::format("filler {:02}", i));
    const std::vector<std::string> list(names.begin(), names.end());
    veat::write_archive(veat::synthesize_archive(list, options), output);
    std::cout << fmt::format("wrote {} concepts x {} videos to {}\n", list.size(), options.members,
                             output);
  } catch (const veat::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
