#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#ifndef _WIN32
#include <unistd.h>
#endif

#include "codeprompt/corpus.hpp"
#include "codeprompt/templates.hpp"
#include "codeprompt/util.hpp"

namespace testsupport {

inline std::filesystem::path repo_root() {
  if (const char* env = std::getenv("CODEPROMPT_REPO_ROOT")) return env;
  return CODEPROMPT_SOURCE_ROOT;
}

inline std::filesystem::path fixture(const std::string& rel) {
  return repo_root() / "fixtures" / rel;
}

inline std::string fixture_text(const std::string& rel) {
  return codeprompt::util::read_file(fixture(rel));
}

inline const codeprompt::prompts::TemplateSet& templates() {
  static codeprompt::prompts::TemplateSet set =
      codeprompt::prompts::TemplateSet::load(repo_root() / "templates" / "paper-v1");
  return set;
}

inline codeprompt::Instance load_single(codeprompt::DatasetKind kind, const std::string& rel) {
  auto instances = codeprompt::corpus::load_dataset(kind, fixture(rel));
  return instances.at(0);
}

// Fresh scratch directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
  std::filesystem::path dir = std::filesystem::temp_directory_path() /
                              ("codeprompt-tests-" + std::to_string(::getpid())) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
