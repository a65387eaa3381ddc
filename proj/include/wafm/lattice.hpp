#pragma once

#include <array>
#include <string>
#include <vector>

namespace wafm {

// Coordinates beyond the lattice dimension stay zero, so parity and
// reflection code never has to look at d.
struct Site {
  std::array<int, 3> x{};
  bool operator==(const Site&) const = default;
};

struct Momentum {
  std::array<int, 3> n{};
  std::array<double, 3> p{};
  bool operator==(const Momentum& o) const { return n == o.n; }
};

class LatticeSpec {
 public:
  LatticeSpec(int d, std::vector<int> half_sides);

  int dim() const { return d_; }
  // Directions are 1-based throughout, matching the physics notation.
  int half_side(int mu) const { return half_[mu - 1]; }
  int side(int mu) const { return 2 * half_[mu - 1]; }
  const std::vector<int>& half_sides() const { return half_; }
  int num_sites() const { return num_sites_; }
  int num_modes() const { return 4 * num_sites_; }

  int index(const Site& s) const;
  Site site(int index) const;
  std::vector<Site> sites() const;
  bool contains(const Site& s) const;

  std::string describe() const;

 private:
  int d_;
  std::vector<int> half_;
  std::array<int, 3> stride_{};
  int num_sites_ = 1;
};

struct Neighbor {
  Site site;
  bool crossed = false;
};

Neighbor neighbor(const LatticeSpec& spec, const Site& x, int mu);
Site previous(const LatticeSpec& spec, const Site& x, int mu);

int parity(const Site& x);

struct PlaneSplit {
  int axis = 1;
  std::vector<int> plus;     // site indices with x^(axis) >= 1
  std::vector<int> minus;    // site indices with x^(axis) <= 0
  std::vector<int> reflect;  // x^(axis) -> 1 - x^(axis), wrapped
  std::vector<bool> in_plus;
};

PlaneSplit split_by_plane(const LatticeSpec& spec, int axis);

std::vector<Momentum> momenta(const LatticeSpec& spec);
Momentum make_momentum(const LatticeSpec& spec, std::array<int, 3> n);
Momentum antiferro_momentum(const LatticeSpec& spec);
Momentum negate(const LatticeSpec& spec, const Momentum& p);
Momentum shift_by_q(const LatticeSpec& spec, const Momentum& p);
bool is_member(const LatticeSpec& spec, const Momentum& p);

double dispersion(const LatticeSpec& spec, const Momentum& p);

}  // namespace wafm
