#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vexp/geometry.hpp"

namespace vexp {

// Descriptor of a finite stand-in for "all cubes".
struct FamilySpec {
  int dim = 1;
  // Dyadic cubes of side 2^-j for level_min <= j <= level_max, inside `bounds`.
  int level_min = 0;
  int level_max = 0;
  bool dyadic = true;
  Box bounds{1, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  // Per dyadic level at most this many cubes: those touching a shrink target
  // are always kept, the rest is a seeded sample.
  int max_per_level = 64;

  // Cubes centered at each target with side shrink_side * 2^-k, k = 0..shrink_levels.
  std::vector<Point> shrink_targets;
  int shrink_levels = 0;
  double shrink_side = 2.0;

  int special_count = 0;  // Q_0 .. Q_{K-1}
  int random_count = 0;
  std::uint64_t seed = 0;

  std::vector<Cube> explicit_cubes;

  void validate() const;
};

class CubeFamily {
 public:
  enum class Kind { Dyadic, Special, Shrink, Random, Explicit };
  struct Tag {
    Kind kind = Kind::Explicit;
    int level = 0;   // dyadic level, special index or shrink step
    int target = -1; // shrink target index
  };

  static CubeFamily generate(const FamilySpec& spec);
  static CubeFamily from_cubes(int dim, std::vector<Cube> cubes);

  int dim() const { return dim_; }
  const std::vector<Cube>& cubes() const { return cubes_; }
  const std::vector<Tag>& tags() const { return tags_; }
  std::size_t size() const { return cubes_.size(); }
  const Cube& operator[](std::size_t i) const { return cubes_[i]; }

  // Index sequences of cubes shrinking toward each target, largest first.
  const std::vector<std::vector<std::size_t>>& shrinking() const { return shrinking_; }

 private:
  void add(const Cube& q, Tag tag);

  int dim_ = 1;
  std::vector<Cube> cubes_;
  std::vector<Tag> tags_;
  std::vector<std::vector<std::size_t>> shrinking_;
};

std::string to_string(CubeFamily::Kind kind);

// Sup estimate over a cube family. A per-cube value of +inf stands for a
// divergent (non-finite) norm on that cube.
struct CharacteristicReport {
  struct Row {
    Cube cube;
    double value = 0.0;
    bool divergent = false;
    std::string note;
  };
  std::vector<Row> rows;
  double sup_value = 0.0;
  std::size_t argmax = 0;
  bool divergent = false;
  std::string divergence_reason;
  double cap = 1e12;

  std::optional<double> sup() const {
    if (divergent) return std::nullopt;
    return sup_value;
  }
};

// Fills sup/argmax and decides divergence: a value above the cap (or infinite),
// or, along one of the family's shrinking subsequences, three consecutive
// increasing values whose last exceeds twice the first.
void finalize_report(CharacteristicReport& report, const CubeFamily& family);

// Seeded generator for family sampling. Wraps std::mt19937_64, whose output
// sequence is fixed by the standard; the scaling to [0, 1) is done here
// because std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : gen_() % n; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace vexp
