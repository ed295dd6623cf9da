#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace latstab {

using Coord = std::array<int, 4>;  // 1-based, entries beyond d unused

enum class Boundary { Free, Periodic };

struct Bond {
  int site = 0;  // origin x
  int mu = 0;    // direction
  int target = 0;
};

// Vertices x, x+e_mu, x+e_mu+e_nu, x+e_nu; holonomy g1 g2 g3^{-1} g4^{-1} with
// b1 = b_mu(x), b2 = b_nu(x+e_mu), b3 = b_mu(x+e_nu), b4 = b_nu(x).
struct Plaquette {
  int site = 0;
  int mu = 0;
  int nu = 0;
  std::array<int, 4> bonds{};
  static constexpr std::array<int, 4> signs{+1, +1, -1, -1};
};

struct GaugeFixing {
  std::vector<bool> in_tree;    // indexed by bond
  std::vector<int> tree;        // gauged-away bonds, ascending
  std::vector<int> retained;    // ascending
};

class Lattice {
 public:
  Lattice(int d, int L, double a = 1.0, Boundary bc = Boundary::Free);

  int d() const { return d_; }
  int L() const { return L_; }
  double a() const { return a_; }

  int num_sites() const { return static_cast<int>(coords_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  int num_plaquettes() const { return static_cast<int>(plaquettes_.size()); }
  // Closed-form Lambda_r = d L^{d-1}(L-1) - (L^d - 1).
  int num_retained() const;

  const Coord& coord(int site) const { return coords_[site]; }
  int site_index(const Coord& x) const;
  // Neighbour x + e_mu, or -1 when it leaves the lattice.
  int neighbor(int site, int mu) const;
  // Index of b_mu(x), or -1 when absent.
  int bond_index(int site, int mu) const { return bond_lookup_[site * d_ + mu]; }

  const std::vector<Bond>& bonds() const { return bonds_; }
  const std::vector<Plaquette>& plaquettes() const { return plaquettes_; }
  const Bond& bond(int b) const { return bonds_[b]; }
  const Plaquette& plaquette(int p) const { return plaquettes_[p]; }

  // bond -> plaquettes containing it
  const std::vector<std::vector<int>>& incidence() const { return incidence_; }
  // Plaquettes whose plane excludes direction 0.
  std::vector<int> horizontal_plaquettes() const;

  std::string describe() const;

 private:
  int d_, L_;
  double a_;
  std::vector<Coord> coords_;
  std::vector<int> strides_;
  std::vector<int> bond_lookup_;
  std::vector<Bond> bonds_;
  std::vector<Plaquette> plaquettes_;
  std::vector<std::vector<int>> incidence_;
};

// Closed forms used to cross-check enumeration.
std::int64_t site_count(int d, int L);
std::int64_t bond_count(int d, int L);
std::int64_t plaquette_count(int d, int L);
std::int64_t retained_count(int d, int L);
// Per-dimension polynomial forms (L-1)^2, (2L+1)(L-1)^2, (3L^3-L^2-L-1)(L-1).
std::int64_t retained_count_polynomial(int d, int L);

// Tree: every b_0, then b_1 on x^0 = 1, b_2 on x^0 = x^1 = 1, b_3 on x^0 = x^1 = x^2 = 1.
GaugeFixing enhanced_temporal_gauge(const Lattice& lattice);

struct TreeCheck {
  bool spanning = false;
  bool acyclic = false;
  bool retained_close_cycles = false;
  bool ok() const { return spanning && acyclic && retained_close_cycles; }
};
// Union-find verification of a gauge fixing.
TreeCheck verify_gauge_fixing(const Lattice& lattice, const GaugeFixing& fixing);

// Maximal straight runs of bonds along direction mu (used by the chain bound).
std::vector<std::vector<int>> chains(const Lattice& lattice, int mu);

}  // namespace latstab
