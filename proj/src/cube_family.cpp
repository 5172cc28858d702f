#include "vexp/cube_family.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vexp {

void FamilySpec::validate() const {
  check_dimension(dim);
  if (bounds.dim != dim) throw InvalidInput("family bounds dimension mismatch");
  for (int i = 0; i < dim; ++i)
    if (!(bounds.hi[i] > bounds.lo[i])) throw InvalidInput("family bounds are empty");
  if (level_min > level_max) throw InvalidInput("family level_min exceeds level_max");
  if (level_max > 40 || level_min < -40) throw InvalidInput("dyadic level out of range");
  if (max_per_level < 1) throw InvalidInput("max_per_level must be positive");
  if (shrink_levels < 0 || special_count < 0 || random_count < 0)
    throw InvalidInput("family counts must be non-negative");
  if (!(shrink_side > 0.0)) throw InvalidInput("shrink_side must be positive");
  for (const auto& q : explicit_cubes)
    if (q.dim() != dim) throw InvalidInput("explicit cube dimension mismatch");
}

std::string to_string(CubeFamily::Kind kind) {
  switch (kind) {
    case CubeFamily::Kind::Dyadic: return "dyadic";
    case CubeFamily::Kind::Special: return "special";
    case CubeFamily::Kind::Shrink: return "shrink";
    case CubeFamily::Kind::Random: return "random";
    case CubeFamily::Kind::Explicit: return "explicit";
  }
  return "unknown";
}

void CubeFamily::add(const Cube& q, Tag tag) {
  cubes_.push_back(q);
  tags_.push_back(tag);
}

CubeFamily CubeFamily::from_cubes(int dim, std::vector<Cube> cubes) {
  check_dimension(dim);
  if (cubes.empty()) throw InvalidInput("cube family must be non-empty");
  CubeFamily f;
  f.dim_ = dim;
  for (const auto& q : cubes) {
    if (q.dim() != dim) throw InvalidInput("cube dimension mismatch in family");
    f.add(q, {Kind::Explicit, 0, -1});
  }
  return f;
}

CubeFamily CubeFamily::generate(const FamilySpec& spec) {
  spec.validate();
  CubeFamily f;
  f.dim_ = spec.dim;
  const int n = spec.dim;
  Rng rng(spec.seed);

  if (spec.dyadic) {
    for (int j = spec.level_min; j <= spec.level_max; ++j) {
      const double h = std::ldexp(1.0, -j);
      std::array<long long, kMaxDim> first{}, count{};
      std::uint64_t total = 1;
      bool empty = false;
      for (int i = 0; i < n; ++i) {
        first[i] = static_cast<long long>(std::ceil(spec.bounds.lo[i] / h - 1e-9));
        const long long last = static_cast<long long>(std::floor(spec.bounds.hi[i] / h + 1e-9));
        count[i] = last - first[i];
        if (count[i] <= 0) empty = true;
        else total *= static_cast<std::uint64_t>(count[i]);
      }
      if (empty) continue;

      auto cube_at = [&](std::uint64_t flat) {
        Point c{};
        for (int i = 0; i < n; ++i) {
          const long long k = first[i] + static_cast<long long>(flat % count[i]);
          flat /= count[i];
          c[i] = (static_cast<double>(k) + 0.5) * h;
        }
        return Cube(n, c, h);
      };

      if (total <= static_cast<std::uint64_t>(spec.max_per_level)) {
        for (std::uint64_t k = 0; k < total; ++k) f.add(cube_at(k), {Kind::Dyadic, j, -1});
        continue;
      }
      std::set<std::uint64_t> chosen;
      // Cubes with a shrink target in their closure.
      for (const auto& t : spec.shrink_targets) {
        std::vector<std::vector<long long>> per_axis(n);
        bool outside = false;
        for (int i = 0; i < n; ++i) {
          const double u = t[i] / h;
          const long long a = static_cast<long long>(std::floor(u));
          for (long long k : {a - 1, a}) {
            const double lo = k * h, hi = (k + 1) * h;
            if (t[i] >= lo - 1e-12 * h && t[i] <= hi + 1e-12 * h && k >= first[i] &&
                k < first[i] + count[i])
              per_axis[i].push_back(k);
          }
          if (per_axis[i].empty()) outside = true;
        }
        if (outside) continue;
        std::array<std::size_t, kMaxDim> idx{};
        while (true) {
          std::uint64_t flat = 0, stride = 1;
          for (int i = 0; i < n; ++i) {
            flat += static_cast<std::uint64_t>(per_axis[i][idx[i]] - first[i]) * stride;
            stride *= static_cast<std::uint64_t>(count[i]);
          }
          chosen.insert(flat);
          int i = 0;
          for (; i < n; ++i) {
            if (++idx[i] < per_axis[i].size()) break;
            idx[i] = 0;
          }
          if (i == n) break;
        }
      }
      const std::size_t want = static_cast<std::size_t>(spec.max_per_level);
      for (int guard = 0; chosen.size() < want && guard < 64 * spec.max_per_level; ++guard)
        chosen.insert(rng.below(total));
      for (std::uint64_t k : chosen) f.add(cube_at(k), {Kind::Dyadic, j, -1});
    }
  }

  for (int k = 0; k < spec.special_count; ++k) f.add(special_cube(n, k), {Kind::Special, k, -1});

  for (std::size_t t = 0; t < spec.shrink_targets.size(); ++t) {
    std::vector<std::size_t> seq;
    for (int k = 0; k <= spec.shrink_levels; ++k) {
      seq.push_back(f.cubes_.size());
      f.add(Cube(n, spec.shrink_targets[t], spec.shrink_side * std::ldexp(1.0, -k)),
            {Kind::Shrink, k, static_cast<int>(t)});
    }
    f.shrinking_.push_back(std::move(seq));
  }

  for (int k = 0; k < spec.random_count; ++k) {
    Point c{};
    for (int i = 0; i < n; ++i) c[i] = rng.uniform(spec.bounds.lo[i], spec.bounds.hi[i]);
    const double level = rng.uniform(spec.level_min, spec.level_max + 1.0);
    f.add(Cube(n, c, std::exp2(-level)), {Kind::Random, k, -1});
  }

  for (const auto& q : spec.explicit_cubes) f.add(q, {Kind::Explicit, 0, -1});

  if (f.cubes_.empty()) throw InvalidInput("cube family descriptor produced no cubes");
  return f;
}

void finalize_report(CharacteristicReport& report, const CubeFamily& family) {
  report.divergent = false;
  report.divergence_reason.clear();
  report.sup_value = 0.0;
  report.argmax = 0;
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    auto& row = report.rows[i];
    if (!std::isfinite(row.value) || row.value > report.cap) {
      row.divergent = true;
      if (!report.divergent) {
        report.divergent = true;
        report.divergence_reason = "value above cap at " + row.cube.describe();
        report.argmax = i;
      }
      continue;
    }
    if (!report.divergent && row.value > report.sup_value) {
      report.sup_value = row.value;
      report.argmax = i;
    }
  }
  if (report.divergent) {
    report.sup_value = std::numeric_limits<double>::infinity();
    return;
  }
  if (report.rows.size() != family.size()) return;
  for (const auto& seq : family.shrinking()) {
    if (seq.size() < 3) continue;
    const double a = report.rows[seq[seq.size() - 3]].value;
    const double b = report.rows[seq[seq.size() - 2]].value;
    const double c = report.rows[seq[seq.size() - 1]].value;
    if (a > 0.0 && a < b && b < c && c >= 2.0 * a) {
      report.divergent = true;
      report.divergence_reason = "growth along shrinking cubes at " +
                                 report.rows[seq.back()].cube.describe();
      report.argmax = seq.back();
      report.sup_value = std::numeric_limits<double>::infinity();
      return;
    }
  }
}

}  // namespace vexp
