#include "priorlens/tables.hpp"

#include <algorithm>
#include <stdexcept>

namespace priorlens {

double THistogram::probability(std::size_t t) const {
  if (samples_ == 0) throw std::invalid_argument("THistogram: no samples");
  return static_cast<double>(counts_.at(t)) / static_cast<double>(samples_);
}

void THistogram::merge(const THistogram& other) {
  if (counts_.empty()) counts_.assign(other.counts_.size(), 0);
  if (other.counts_.size() != counts_.size()) {
    throw std::invalid_argument("THistogram::merge: m differs");
  }
  for (std::size_t t = 0; t < counts_.size(); ++t) counts_[t] += other.counts_[t];
  samples_ += other.samples_;
}

void FreqTable::merge(const FreqTable& other) {
  for (const auto& [p, c] : other.map_) map_.try_emplace(p, 0).first->second += c;
  samples_ += other.samples_;
}

std::uint64_t FreqTable::count(const OutputPattern& p) const {
  const auto it = map_.find(p);
  return it == map_.end() ? 0 : it->second;
}

std::vector<std::pair<OutputPattern, std::uint64_t>> FreqTable::sorted() const {
  std::vector<std::pair<OutputPattern, std::uint64_t>> v(map_.begin(), map_.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return v;
}

}  // namespace priorlens
