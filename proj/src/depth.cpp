#include "depthnorm/depth.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "depthnorm/error.hpp"
#include "depthnorm/io.hpp"
#include "depthnorm/kernels.hpp"
#include "depthnorm/parallel.hpp"

namespace depthnorm {

std::string_view to_string(ReferenceSource source) noexcept {
  switch (source) {
    case ReferenceSource::component_median: return "component_median";
    case ReferenceSource::deepest: return "deepest";
    case ReferenceSource::deepest_pair_average: return "deepest_pair_average";
  }
  return "?";
}

ReferenceCurve::ReferenceCurve(std::vector<double> values, ReferenceSource source)
    : values_(std::move(values)), source_(source) {
  if (values_.empty()) throw DomainError("reference curve is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) throw DomainError("reference curve has a non-finite value");
    if (i > 0 && values_[i] < values_[i - 1]) {
      throw DomainError("reference curve decreases at position " + std::to_string(i + 1));
    }
  }
}

DistanceMatrix pairwise_distances(const ExpressionMatrix& m) {
  const std::size_t n = m.cols();
  DistanceMatrix dm(n);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<double> out(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    out[k] = std::sqrt(kernels::squared_distance(m.column(i), m.column(j)));
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) dm.set(pairs[k].first, pairs[k].second, out[k]);
  return dm;
}

BorderSequence::BorderSequence(std::vector<Border> borders, std::size_t n)
    : borders_(std::move(borders)), n_(n) {
  std::vector<int> seen(n, 0);
  for (const auto& b : borders_) {
    for (const auto idx : {std::optional<std::size_t>(b.first), b.second}) {
      if (!idx) continue;
      if (*idx >= n || seen[*idx]++) throw DimensionError("border sequence is not a partition");
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(n) ||
      borders_.empty()) {
    throw DimensionError("border sequence does not cover every column");
  }
}

std::vector<double> BorderSequence::distances() const {
  std::vector<double> out;
  out.reserve(borders_.size());
  for (const auto& b : borders_) out.push_back(b.distance);
  return out;
}

BorderSequence extract_borders(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  if (n < 2) throw DimensionError("border extraction needs at least 2 columns");

  // The greedy argmax over the surviving columns is the first pair in this
  // order whose members are both still alive.
  struct Candidate {
    double distance;
    std::size_t i, j;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) candidates.push_back({dm(i, j), i, j});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.distance != b.distance) return a.distance > b.distance;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  std::vector<bool> alive(n, true);
  std::size_t remaining = n;
  std::vector<Border> borders;
  for (const auto& c : candidates) {
    if (remaining < 2) break;
    if (!alive[c.i] || !alive[c.j]) continue;
    borders.push_back({c.i, c.j, c.distance});
    alive[c.i] = alive[c.j] = false;
    remaining -= 2;
  }
  if (remaining == 1) {
    const auto last = static_cast<std::size_t>(std::find(alive.begin(), alive.end(), true) - alive.begin());
    borders.push_back({last, std::nullopt, 0.0});
  }
  return BorderSequence(std::move(borders), n);
}

DepthResult depth_values(const BorderSequence& bs) {
  DepthResult out;
  out.sample_count = bs.sample_count();
  out.border_index.assign(bs.sample_count(), 0);
  const auto& borders = bs.borders();
  for (std::size_t k = 0; k < borders.size(); ++k) {
    out.border_index[borders[k].first] = k + 1;
    if (borders[k].second) out.border_index[*borders[k].second] = k + 1;
  }
  out.deepest.push_back(bs.deepest().first);
  if (bs.deepest().second) out.deepest.push_back(*bs.deepest().second);
  std::sort(out.deepest.begin(), out.deepest.end());
  return out;
}

FunctionalDepth functional_depth(const ExpressionMatrix& m) {
  auto distances = pairwise_distances(m);
  auto borders = extract_borders(distances);
  auto depth = depth_values(borders);
  return {std::move(distances), std::move(borders), std::move(depth)};
}

std::vector<double> deepest_element(const ExpressionMatrix& m, const BorderSequence& bs) {
  const auto& last = bs.deepest();
  const auto a = m.column(last.first);
  if (!last.second) return {a.begin(), a.end()};
  const auto b = m.column(*last.second);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] + b[i]) / 2.0;
  return out;
}

ReferenceCurve deepest_curve(const ExpressionMatrix& m, const BorderSequence& bs) {
  if (!m.sorted()) throw DomainError("deepest_curve needs column-sorted input");
  const auto source =
      bs.deepest().singleton() ? ReferenceSource::deepest : ReferenceSource::deepest_pair_average;
  return ReferenceCurve(deepest_element(m, bs), source);
}

ReferenceCurve deepest_curve(const ExpressionMatrix& m) {
  if (!m.sorted()) throw DomainError("deepest_curve needs column-sorted input");
  return deepest_curve(m, extract_borders(pairwise_distances(m)));
}

void write_depth_csv(std::ostream& out, const ExpressionMatrix& m, const BorderSequence& bs,
                     const DepthResult& depth) {
  std::vector<const Border*> border_of(m.cols(), nullptr);
  for (const auto& b : bs.borders()) {
    border_of[b.first] = &b;
    if (b.second) border_of[*b.second] = &b;
  }
  out << "sample_id,border_index,depth,intra_pair_distance,pair_partner_id\n";
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Border& b = *border_of[j];
    out << m.sample_ids()[j] << ',' << depth.border_index[j] << ',' << format_double(depth.depth(j))
        << ',' << format_double(b.distance) << ',';
    if (b.second) out << m.sample_ids()[b.first == j ? *b.second : b.first];
    out << '\n';
  }
}

}  // namespace depthnorm
