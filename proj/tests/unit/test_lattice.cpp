#include <set>

#include "doctest.h"
#include "latstab/error.hpp"
#include "latstab/lattice.hpp"

using namespace latstab;

namespace {

// Enumerates bonds and plaquettes by walking all coordinate tuples.
struct BruteCounts {
  int sites = 0, bonds = 0, plaquettes = 0;
};

BruteCounts brute_force(int d, int L) {
  BruteCounts c;
  std::vector<int> x(d, 1);
  for (;;) {
    ++c.sites;
    for (int mu = 0; mu < d; ++mu) {
      if (x[mu] < L) ++c.bonds;
      for (int nu = mu + 1; nu < d; ++nu)
        if (x[mu] < L && x[nu] < L) ++c.plaquettes;
    }
    int k = d - 1;
    while (k >= 0 && ++x[k] > L) x[k--] = 1;
    if (k < 0) break;
  }
  return c;
}

}  // namespace

TEST_CASE("enumeration counts") {
  Lattice l22(2, 2);
  CHECK(l22.num_sites() == 4);
  CHECK(l22.num_bonds() == 4);
  CHECK(l22.num_plaquettes() == 1);
  Lattice l33(3, 3);
  CHECK(l33.num_sites() == 27);
  CHECK(l33.num_bonds() == 54);
  CHECK(l33.num_plaquettes() == 36);
  Lattice l42(4, 2);
  CHECK(l42.num_sites() == 16);
  CHECK(l42.num_bonds() == 32);
  CHECK(l42.num_plaquettes() == 24);
  for (int d = 2; d <= 4; ++d)
    for (int L = 2; L <= (d == 4 ? 5 : 7); ++L) {
      Lattice lat(d, L);
      const auto bf = brute_force(d, L);
      CHECK(lat.num_sites() == bf.sites);
      CHECK(lat.num_bonds() == bf.bonds);
      CHECK(lat.num_plaquettes() == bf.plaquettes);
      CHECK(lat.num_bonds() == bond_count(d, L));
      CHECK(lat.num_plaquettes() == plaquette_count(d, L));
    }
}

TEST_CASE("ordering is lexicographic and indices are dense") {
  Lattice lat(3, 3);
  int prev_key = -1;
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond& bond = lat.bond(b);
    const int key = bond.site * lat.d() + bond.mu;
    CHECK(key > prev_key);
    prev_key = key;
    CHECK(lat.bond_index(bond.site, bond.mu) == b);
  }
  for (int s = 0; s < lat.num_sites(); ++s) CHECK(lat.site_index(lat.coord(s)) == s);
  CHECK(lat.coord(0) == Coord{1, 1, 1, 0});
  CHECK(lat.coord(1) == Coord{1, 1, 2, 0});
}

TEST_CASE("plaquette bonds follow the vertex list") {
  Lattice lat(3, 3);
  for (const auto& p : lat.plaquettes()) {
    const int xm = lat.neighbor(p.site, p.mu), xn = lat.neighbor(p.site, p.nu);
    CHECK(p.mu < p.nu);
    CHECK(p.bonds[0] == lat.bond_index(p.site, p.mu));
    CHECK(p.bonds[1] == lat.bond_index(xm, p.nu));
    CHECK(p.bonds[2] == lat.bond_index(xn, p.mu));
    CHECK(p.bonds[3] == lat.bond_index(p.site, p.nu));
    // closed loop: b1 ends where b2 starts; b2 and b3 end on the same vertex
    CHECK(lat.bond(p.bonds[0]).target == lat.bond(p.bonds[1]).site);
    CHECK(lat.bond(p.bonds[1]).target == lat.bond(p.bonds[2]).target);
    CHECK(lat.bond(p.bonds[3]).target == lat.bond(p.bonds[2]).site);
  }
}

TEST_CASE("enhanced temporal gauge retained counts") {
  CHECK(enhanced_temporal_gauge(Lattice(2, 2)).retained.size() == 1);
  CHECK(enhanced_temporal_gauge(Lattice(3, 2)).retained.size() == 5);
  CHECK(enhanced_temporal_gauge(Lattice(4, 2)).retained.size() == 17);
  for (int d = 2; d <= 4; ++d)
    for (int L = 2; L <= 8; ++L) {
      CHECK(retained_count(d, L) == retained_count_polynomial(d, L));
      if (d == 4 && L > 5) continue;
      Lattice lat(d, L);
      const GaugeFixing f = enhanced_temporal_gauge(lat);
      CHECK(static_cast<std::int64_t>(f.retained.size()) == retained_count(d, L));
      CHECK(static_cast<int>(f.tree.size()) == lat.num_sites() - 1);
      CHECK(verify_gauge_fixing(lat, f).ok());
    }
}

TEST_CASE("tree rules per direction") {
  Lattice lat(4, 3);
  const GaugeFixing f = enhanced_temporal_gauge(lat);
  for (int b = 0; b < lat.num_bonds(); ++b) {
    const Bond& bond = lat.bond(b);
    const Coord& x = lat.coord(bond.site);
    bool expected = true;
    if (bond.mu >= 1) expected = expected && x[0] == 1;
    if (bond.mu >= 2) expected = expected && x[1] == 1;
    if (bond.mu >= 3) expected = expected && x[2] == 1;
    CHECK(f.in_tree[b] == expected);
  }
}

TEST_CASE("verification rejects a broken tree") {
  Lattice lat(2, 3);
  GaugeFixing f = enhanced_temporal_gauge(lat);
  // swap one tree bond for a retained one: a cycle appears and a site is cut off
  const int removed = f.tree.back();
  const int added = f.retained.front();
  f.tree.back() = added;
  f.retained.front() = removed;
  f.in_tree[removed] = false;
  f.in_tree[added] = true;
  CHECK_FALSE(verify_gauge_fixing(lat, f).ok());
}

TEST_CASE("retained-to-site ratio approaches d - 1") {
  for (int d = 2; d <= 4; ++d)
    for (int L = 2; L <= 12; ++L) {
      const double ratio = static_cast<double>(retained_count(d, L)) / site_count(d, L);
      CHECK(std::abs(ratio - (d - 1)) < 2.0 * d / L);
    }
}

TEST_CASE("plaquette and retained counts coincide only in d = 2") {
  for (int L = 2; L <= 6; ++L) {
    CHECK(plaquette_count(2, L) == retained_count(2, L));
    CHECK(plaquette_count(3, L) != retained_count(3, L));
    CHECK(plaquette_count(4, L) != retained_count(4, L));
  }
}

TEST_CASE("bond-plaquette incidence") {
  Lattice l22(2, 2);
  for (const auto& list : l22.incidence()) CHECK(list.size() == 1);
  Lattice l34(3, 4);
  const int interior = l34.bond_index(l34.site_index({2, 2, 2, 0}), 0);
  CHECK(l34.incidence()[interior].size() == 4);
  for (const auto& list : l34.incidence()) CHECK(list.size() <= 4);
  Lattice l43(4, 3);
  std::size_t worst = 0;
  for (const auto& list : l43.incidence()) worst = std::max(worst, list.size());
  CHECK(worst == 6);
}

TEST_CASE("horizontal plaquettes exclude direction 0") {
  CHECK(Lattice(2, 4).horizontal_plaquettes().empty());
  const Lattice l32(3, 2);
  CHECK(l32.horizontal_plaquettes().size() == 2);
  CHECK(l32.num_plaquettes() == 6);
  const Lattice l42(4, 2);
  CHECK(l42.horizontal_plaquettes().size() == 12);
  for (int p : l42.horizontal_plaquettes()) CHECK(l42.plaquette(p).mu != 0);
}

TEST_CASE("chains are maximal straight runs") {
  Lattice lat(3, 4);
  for (int mu = 0; mu < 3; ++mu) {
    const auto runs = chains(lat, mu);
    CHECK(runs.size() == 16);
    std::set<int> seen;
    for (const auto& run : runs) {
      CHECK(run.size() == 3);
      for (int b : run) {
        CHECK(lat.bond(b).mu == mu);
        seen.insert(b);
      }
    }
    CHECK(seen.size() == 48);
  }
}

TEST_CASE("invalid lattices are rejected") {
  CHECK_THROWS_AS(Lattice(5, 2), InvalidArgument);
  CHECK_THROWS_AS(Lattice(2, 1), InvalidArgument);
  CHECK_THROWS_AS(Lattice(2, 2, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Lattice(2, 2, 1.5), InvalidArgument);
  CHECK_THROWS_AS(Lattice(2, 2, 1.0, Boundary::Periodic), InvalidArgument);
}
