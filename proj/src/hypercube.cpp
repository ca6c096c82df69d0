#include "priorlens/hypercube.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "priorlens/errors.hpp"
#include "priorlens/rng.hpp"

namespace priorlens {

std::string to_string(InputKind kind) {
  switch (kind) {
    case InputKind::hypercube01:
      return "hypercube01";
    case InputKind::hypercube_pm1:
      return "hypercube-pm1";
    case InputKind::subsample:
      return "subsample";
    case InputKind::external:
      return "external";
  }
  return "unknown";
}

InputSet::InputSet(RowMatrix points, InputKind kind, std::vector<std::uint32_t> source_index)
    : points_(std::move(points)), kind_(kind), source_index_(std::move(source_index)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw std::invalid_argument("InputSet: need at least one point of dimension >= 1");
  }
  if (!source_index_.empty() && source_index_.size() != m()) {
    throw std::invalid_argument("InputSet: source index length differs from point count");
  }
}

std::string InputSet::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(m=" << m() << ",n=" << n() << ")";
  return os.str();
}

std::vector<int> bin_point(std::uint64_t index, int n) {
  std::vector<int> point(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) point[k] = static_cast<int>((index >> (n - 1 - k)) & 1U);
  return point;
}

std::uint64_t bin_index(std::span<const int> point) {
  std::uint64_t index = 0;
  for (const int x : point) index = (index << 1) | static_cast<std::uint64_t>(x != 0);
  return index;
}

namespace {

void fill_row(RowMatrix& pts, Eigen::Index row, std::uint64_t index, int n, bool pm1) {
  for (int k = 0; k < n; ++k) {
    const double bit = static_cast<double>((index >> (n - 1 - k)) & 1U);
    pts(row, k) = pm1 ? 2.0 * bit - 1.0 : bit;
  }
}

}  // namespace

InputSet build_input_set(int n, InputKind kind, std::optional<Subsample> subsample) {
  if (kind != InputKind::hypercube01 && kind != InputKind::hypercube_pm1) {
    throw std::invalid_argument("build_input_set: kind must be hypercube01 or hypercube-pm1");
  }
  if (n < 1 || n > kMaxHypercubeDim) {
    throw std::invalid_argument("build_input_set: dimension must be in [1, " +
                                std::to_string(kMaxHypercubeDim) + "]");
  }
  const bool pm1 = kind == InputKind::hypercube_pm1;
  const std::uint64_t full = std::uint64_t{1} << n;

  if (!subsample) {
    RowMatrix pts(static_cast<Eigen::Index>(full), n);
    for (std::uint64_t i = 0; i < full; ++i) fill_row(pts, static_cast<Eigen::Index>(i), i, n, pm1);
    return InputSet(std::move(pts), kind);
  }

  if (subsample->size < 1 || subsample->size > full) {
    throw std::invalid_argument("build_input_set: subsample size must be in [1, 2^n]");
  }
  // Partial Fisher-Yates, then restore canonical order.
  std::vector<std::uint32_t> idx(full);
  std::iota(idx.begin(), idx.end(), 0U);
  Xoshiro256pp rng(subsample->seed);
  for (std::size_t i = 0; i < subsample->size; ++i) {
    const std::size_t j = i + rng.below(full - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(subsample->size);
  std::sort(idx.begin(), idx.end());

  RowMatrix pts(static_cast<Eigen::Index>(idx.size()), n);
  for (std::size_t r = 0; r < idx.size(); ++r) fill_row(pts, static_cast<Eigen::Index>(r), idx[r], n, pm1);
  return InputSet(std::move(pts), InputKind::subsample, std::move(idx));
}

InputSet load_input_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string_view cell(line.data() + start,
                            (comma == std::string::npos ? line.size() : comma) - start);
      while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() ||
          !std::isfinite(value)) {
        throw ParseError(path + ": row " + std::to_string(line_no) + ", column " +
                         std::to_string(row.size() + 1) + ": non-numeric cell '" +
                         std::string(cell) + "'");
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(path + ": row " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " cells, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure: " + path);
  if (rows.empty()) throw ParseError(path + ": no data rows");

  RowMatrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      pts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return InputSet(std::move(pts), InputKind::external);
}

// OutputPattern

OutputPattern::OutputPattern(std::size_t m)
    : words_((m + 63) / 64, 0), m_(static_cast<std::uint32_t>(m)) {}

OutputPattern OutputPattern::from_bits(std::string_view bits) {
  OutputPattern p(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      p.set(i, true);
    } else if (bits[i] != '0') {
      throw ParseError("pattern bit string contains '" + std::string(1, bits[i]) + "'");
    }
  }
  return p;
}

OutputPattern OutputPattern::from_hex(std::string_view hex, std::size_t m) {
  if (hex.size() != (m + 3) / 4) {
    throw ParseError("hex pattern length " + std::to_string(hex.size()) + " does not match m=" +
                     std::to_string(m));
  }
  OutputPattern p(m);
  for (std::size_t d = 0; d < hex.size(); ++d) {
    const char c = hex[d];
    int v = 0;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      throw ParseError("invalid hex digit '" + std::string(1, c) + "'");
    }
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = 4 * d + static_cast<std::size_t>(b);
      const bool bit = ((v >> (3 - b)) & 1) != 0;
      if (i < m) {
        p.set(i, bit);
      } else if (bit) {
        throw ParseError("hex pattern has set bits beyond m");
      }
    }
  }
  return p;
}

void OutputPattern::clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

void OutputPattern::mask_tail() noexcept {
  if (const std::size_t r = m_ & 63U; r != 0) words_.back() &= (std::uint64_t{1} << r) - 1;
}

std::size_t OutputPattern::popcount() const noexcept {
  std::size_t c = 0;
  for (const auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

OutputPattern OutputPattern::complement() const {
  OutputPattern p = *this;
  for (auto& w : p.words_) w = ~w;
  p.mask_tail();
  return p;
}

OutputPattern OutputPattern::reversed() const {
  OutputPattern p(m_);
  for (std::size_t i = 0; i < m_; ++i) p.set(m_ - 1 - i, get(i));
  return p;
}

bool OutputPattern::is_constant() const noexcept {
  const std::size_t c = popcount();
  return c == 0 || c == m_;
}

std::string OutputPattern::to_bits() const {
  std::string s(m_, '0');
  for (std::size_t i = 0; i < m_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::string OutputPattern::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s((m_ + 3) / 4, '0');
  for (std::size_t d = 0; d < s.size(); ++d) {
    int v = 0;
    for (int b = 0; b < 4; ++b) {
      const std::size_t i = 4 * d + static_cast<std::size_t>(b);
      if (i < m_ && get(i)) v |= 1 << (3 - b);
    }
    s[d] = kDigits[v];
  }
  return s;
}

std::strong_ordering operator<=>(const OutputPattern& a, const OutputPattern& b) noexcept {
  if (a.m_ != b.m_) return a.m_ <=> b.m_;
  for (std::size_t k = 0; k < a.words_.size(); ++k) {
    const std::uint64_t diff = a.words_[k] ^ b.words_[k];
    if (diff != 0) {
      const std::uint64_t lowest = diff & (~diff + 1);
      return (a.words_[k] & lowest) != 0 ? std::strong_ordering::greater
                                         : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

OutputPattern alternating_pattern(std::size_t m) {
  OutputPattern p(m);
  for (std::size_t i = 1; i < m; i += 2) p.set(i, true);
  return p;
}

// SubsetMask

SubsetMask::SubsetMask(int n, std::vector<int> coords) : n_(n), coords_(std::move(coords)) {
  std::sort(coords_.begin(), coords_.end());
  if (std::adjacent_find(coords_.begin(), coords_.end()) != coords_.end()) {
    throw std::invalid_argument("SubsetMask: duplicate coordinate");
  }
  for (const int c : coords_) {
    if (c < 0 || c >= n_) {
      throw std::invalid_argument("SubsetMask: coordinate " + std::to_string(c) +
                                  " outside [0, " + std::to_string(n_) + ")");
    }
  }
}

SubsetMask SubsetMask::all(int n) {
  std::vector<int> c(static_cast<std::size_t>(n));
  std::iota(c.begin(), c.end(), 0);
  return SubsetMask(n, std::move(c));
}

std::size_t t_value(const OutputPattern& p) noexcept { return p.popcount(); }

double entropy(std::size_t t, std::size_t m) {
  if (m == 0) throw std::invalid_argument("entropy: m must be >= 1");
  if (t == 0 || t >= m) return 0.0;
  const double q = static_cast<double>(t) / static_cast<double>(m);
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double entropy(const OutputPattern& p) { return entropy(t_value(p), p.size()); }

OutputPattern restrict(const OutputPattern& p, const SubsetMask& mask) {
  const int n = mask.n();
  if (n > kMaxHypercubeDim || p.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("restrict: pattern length is not 2^n for the mask dimension");
  }
  const int k = mask.size();
  OutputPattern out(std::size_t{1} << k);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t full = 0;
    for (int r = 0; r < k; ++r) {
      if ((j >> (k - 1 - r)) & 1U) full |= std::size_t{1} << (n - 1 - mask.coords()[r]);
    }
    out.set(j, p.get(full));
  }
  return out;
}

}  // namespace priorlens
