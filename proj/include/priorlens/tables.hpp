#pragma once

// Count tables produced by sampling campaigns.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "priorlens/hypercube.hpp"

namespace priorlens {

// counts[t] for t in [0, m].
class THistogram {
 public:
  THistogram() = default;
  explicit THistogram(std::size_t m) : counts_(m + 1, 0) {}

  [[nodiscard]] std::size_t m() const noexcept { return counts_.empty() ? 0 : counts_.size() - 1; }
  [[nodiscard]] std::uint64_t samples() const noexcept { return samples_; }
  [[nodiscard]] const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::uint64_t count(std::size_t t) const { return counts_.at(t); }
  [[nodiscard]] double probability(std::size_t t) const;

  void add(std::size_t t, std::uint64_t c = 1) {
    counts_.at(t) += c;
    samples_ += c;
  }
  void merge(const THistogram& other);

  friend bool operator==(const THistogram&, const THistogram&) = default;

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t samples_ = 0;
};

class FreqTable {
 public:
  using Map = absl::flat_hash_map<OutputPattern, std::uint64_t>;

  void add(const OutputPattern& p, std::uint64_t c = 1) {
    map_.try_emplace(p, 0).first->second += c;
    samples_ += c;
  }
  void merge(const FreqTable& other);
  void reserve(std::size_t n) { map_.reserve(n); }

  [[nodiscard]] std::uint64_t count(const OutputPattern& p) const;
  [[nodiscard]] std::uint64_t samples() const noexcept { return samples_; }
  [[nodiscard]] std::size_t distinct() const noexcept { return map_.size(); }
  [[nodiscard]] const Map& map() const noexcept { return map_; }

  // Entries by descending count, ties by ascending pattern.
  [[nodiscard]] std::vector<std::pair<OutputPattern, std::uint64_t>> sorted() const;

  friend bool operator==(const FreqTable& a, const FreqTable& b) {
    return a.samples_ == b.samples_ && a.map_ == b.map_;
  }

 private:
  Map map_;
  std::uint64_t samples_ = 0;
};

}  // namespace priorlens
