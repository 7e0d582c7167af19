#pragma once

#include "khflow/diagram.hpp"

#include <string>
#include <vector>

namespace khflow {

struct CorpusEntry {
  std::string name;
  std::string pd;
  LinkDiagram diagram;
};

std::string read_text_file(const std::string& path);
std::string default_data_dir();
// *.pd files of <data>/corpus, sorted by name
std::vector<CorpusEntry> load_corpus(const std::string& data_dir);

struct VerifyOptions {
  std::string data_dir = default_data_dir();
  int max_crossings = 8;
  // 0 runs the full range of cube sizes
  int n = 0;
};

struct CheckResult {
  std::string suite;
  bool pass = true;
  std::vector<std::string> details;
};

std::vector<std::string> suite_names();
CheckResult run_suite(const std::string& name, const VerifyOptions& opt);

} // namespace khflow
