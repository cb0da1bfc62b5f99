#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "rankone/diff_hist.hpp"

namespace rankone {

// On-disk histogram cache. One file per (spec prefix, base column, stage);
// the stored window is recorded so a wider cached histogram serves narrower
// queries. Writes go to a temp file first and are renamed into place.
class HistCache {
 public:
  HistCache() = default;
  explicit HistCache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  static std::string key(const std::string& spec_hash, int column, int stage) {
    return spec_hash + "_c" + std::to_string(column) + "_N" + std::to_string(stage);
  }

  std::optional<DiffHistogram> load(const std::string& key, const BigInt& min_window) const {
    if (!enabled()) return std::nullopt;
    std::ifstream is(path_for(key));
    if (!is) return std::nullopt;
    std::string tag;
    DiffHistogram h;
    std::string window_text;
    int base = 0, stage = 0;
    if (!(is >> tag >> base >> stage >> window_text) || tag != "hist") return std::nullopt;
    h.base_column = base;
    h.target_stage = stage;
    h.window = BigInt(window_text);
    if (h.window < min_window) return std::nullopt;
    std::string k, c;
    while (is >> k >> c) h.counts.emplace_back(BigInt(k), BigInt(c));
    h.finish();
    return h;
  }

  void store(const std::string& key, const DiffHistogram& h) const {
    if (!enabled()) return;
    const std::string final_path = path_for(key);
    const std::string tmp_path = final_path + ".tmp";
    {
      std::ofstream os(tmp_path, std::ios::binary | std::ios::trunc);
      if (!os) throw Error("cache: cannot write " + tmp_path);
      os << "hist " << h.base_column << ' ' << h.target_stage << ' ' << h.window.str() << '\n';
      for (const auto& [k, c] : h.counts) os << k.str() << ' ' << c.str() << '\n';
    }
    std::filesystem::rename(tmp_path, final_path);
  }

 private:
  std::string path_for(const std::string& key) const {
    return (std::filesystem::path(dir_) / (key + ".hist")).string();
  }

  std::string dir_;
};

}  // namespace rankone
