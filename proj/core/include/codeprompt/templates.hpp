#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace codeprompt::prompts {

// Versioned prompt wording, loaded from a directory of plain-text files with
// {name} placeholders. A single trailing newline is stripped at load so files
// can end with one without leaking it into message content.
class TemplateSet {
 public:
  static TemplateSet load(const std::filesystem::path& dir);

  const std::string& get(const std::string& name) const;
  bool has(const std::string& name) const;

  // Substitutes {key} occurrences in a single pass; substituted values are
  // never rescanned, and unknown placeholders are left verbatim.
  std::string expand(const std::string& name,
                     const std::map<std::string, std::string>& values) const;
  static std::string expand_text(const std::string& text,
                                 const std::map<std::string, std::string>& values);

  // name -> sha256 of file content, and a stable hash of the whole set.
  const std::map<std::string, std::string>& hashes() const { return hashes_; }
  std::string set_hash() const;
  const std::string& version() const { return version_; }

 private:
  std::map<std::string, std::string> files_;
  std::map<std::string, std::string> hashes_;
  std::string version_;
};

}  // namespace codeprompt::prompts
