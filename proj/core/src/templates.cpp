#include "codeprompt/templates.hpp"

#include <algorithm>

#include "codeprompt/util.hpp"

namespace codeprompt::prompts {

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("template directory not found: " + dir.string());
  TemplateSet set;
  set.version_ = dir.filename().string();
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::string content = util::read_file(file);
    if (!content.empty() && content.back() == '\n') content.pop_back();
    std::string name = file.stem().string();
    set.hashes_[name] = util::sha256_hex(content);
    set.files_[name] = std::move(content);
  }
  if (set.files_.empty()) throw Error("template directory is empty: " + dir.string());
  return set;
}

const std::string& TemplateSet::get(const std::string& name) const {
  auto it = files_.find(name);
  if (it == files_.end()) throw Error("unknown template: " + name);
  return it->second;
}

bool TemplateSet::has(const std::string& name) const { return files_.count(name) > 0; }

std::string TemplateSet::expand_text(const std::string& text,
                                     const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      std::size_t close = text.find('}', i + 1);
      if (close != std::string::npos) {
        std::string key = text.substr(i + 1, close - i - 1);
        auto it = values.find(key);
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

std::string TemplateSet::expand(const std::string& name,
                                const std::map<std::string, std::string>& values) const {
  return expand_text(get(name), values);
}

std::string TemplateSet::set_hash() const {
  std::string acc;
  for (const auto& [name, hash] : hashes_) {
    acc += name;
    acc += '\0';
    acc += hash;
    acc += '\0';
  }
  return util::sha256_hex(acc);
}

}  // namespace codeprompt::prompts
