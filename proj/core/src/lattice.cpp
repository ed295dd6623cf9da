#include "latstab/lattice.hpp"

#include <numeric>
#include <sstream>

#include "latstab/error.hpp"

namespace latstab {

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

std::int64_t site_count(int d, int L) { return ipow(L, d); }
std::int64_t bond_count(int d, int L) { return d * ipow(L, d - 1) * (L - 1); }
std::int64_t plaquette_count(int d, int L) { return (d * (d - 1) / 2) * ipow(L, d - 2) * (L - 1) * (L - 1); }
std::int64_t retained_count(int d, int L) { return bond_count(d, L) - (site_count(d, L) - 1); }

std::int64_t retained_count_polynomial(int d, int L) {
  const std::int64_t l = L;
  switch (d) {
    case 2: return (l - 1) * (l - 1);
    case 3: return (2 * l + 1) * (l - 1) * (l - 1);
    case 4: return (3 * l * l * l - l * l - l - 1) * (l - 1);
    default: throw InvalidArgument("d must be 2, 3 or 4");
  }
}

Lattice::Lattice(int d, int L, double a, Boundary bc) : d_(d), L_(L), a_(a) {
  if (d < 2 || d > 4) throw InvalidArgument("d must be 2, 3 or 4 (got " + std::to_string(d) + ")");
  if (L < 2) throw InvalidArgument("L must be >= 2 (got " + std::to_string(L) + ")");
  if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("a must lie in (0, 1]");
  if (bc != Boundary::Free) throw InvalidArgument("only free boundary conditions are supported");

  const int n = static_cast<int>(site_count(d, L));
  strides_.assign(d, 1);
  for (int mu = d - 2; mu >= 0; --mu) strides_[mu] = strides_[mu + 1] * L;

  coords_.resize(n);
  for (int s = 0; s < n; ++s) {
    Coord x{0, 0, 0, 0};
    int rem = s;
    for (int mu = 0; mu < d; ++mu) {
      x[mu] = rem / strides_[mu] + 1;
      rem %= strides_[mu];
    }
    coords_[s] = x;
  }

  bond_lookup_.assign(static_cast<std::size_t>(n) * d, -1);
  for (int s = 0; s < n; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      const int t = neighbor(s, mu);
      if (t < 0) continue;
      bond_lookup_[s * d + mu] = static_cast<int>(bonds_.size());
      bonds_.push_back(Bond{s, mu, t});
    }
  }

  incidence_.assign(bonds_.size(), {});
  for (int s = 0; s < n; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = mu + 1; nu < d; ++nu) {
        const int xm = neighbor(s, mu), xn = neighbor(s, nu);
        if (xm < 0 || xn < 0) continue;
        Plaquette p;
        p.site = s;
        p.mu = mu;
        p.nu = nu;
        p.bonds = {bond_index(s, mu), bond_index(xm, nu), bond_index(xn, mu), bond_index(s, nu)};
        const int idx = static_cast<int>(plaquettes_.size());
        for (int b : p.bonds) incidence_[b].push_back(idx);
        plaquettes_.push_back(p);
      }
    }
  }
}

int Lattice::num_retained() const { return static_cast<int>(retained_count(d_, L_)); }

int Lattice::site_index(const Coord& x) const {
  int s = 0;
  for (int mu = 0; mu < d_; ++mu) {
    if (x[mu] < 1 || x[mu] > L_) return -1;
    s += (x[mu] - 1) * strides_[mu];
  }
  return s;
}

int Lattice::neighbor(int site, int mu) const {
  if (coords_[site][mu] >= L_) return -1;
  return site + strides_[mu];
}

std::vector<int> Lattice::horizontal_plaquettes() const {
  std::vector<int> out;
  for (int p = 0; p < num_plaquettes(); ++p)
    if (plaquettes_[p].mu != 0) out.push_back(p);
  return out;
}

std::string Lattice::describe() const {
  std::ostringstream os;
  os << "d=" << d_ << " L=" << L_ << " a=" << a_;
  return os.str();
}

GaugeFixing enhanced_temporal_gauge(const Lattice& lattice) {
  GaugeFixing f;
  const int d = lattice.d();
  f.in_tree.assign(lattice.num_bonds(), false);
  for (int b = 0; b < lattice.num_bonds(); ++b) {
    const Bond& bond = lattice.bond(b);
    const Coord& x = lattice.coord(bond.site);
    // b_mu is gauged away when x^0 = ... = x^{mu-1} = 1
    bool fixed = true;
    for (int nu = 0; nu < bond.mu && nu < d; ++nu) fixed = fixed && x[nu] == 1;
    f.in_tree[b] = fixed;
    (fixed ? f.tree : f.retained).push_back(b);
  }
  return f;
}

TreeCheck verify_gauge_fixing(const Lattice& lattice, const GaugeFixing& fixing) {
  TreeCheck check;
  UnionFind uf(lattice.num_sites());
  bool acyclic = true;
  int merged = 0;
  for (int b : fixing.tree) {
    const Bond& bond = lattice.bond(b);
    if (uf.unite(bond.site, bond.target)) {
      ++merged;
    } else {
      acyclic = false;
    }
  }
  check.acyclic = acyclic;
  check.spanning = acyclic && merged == lattice.num_sites() - 1 &&
                   static_cast<int>(fixing.tree.size()) == lattice.num_sites() - 1;
  // With a spanning tree every retained bond joins an already connected pair.
  bool closes = true;
  for (int b : fixing.retained) {
    const Bond& bond = lattice.bond(b);
    closes = closes && uf.find(bond.site) == uf.find(bond.target);
  }
  check.retained_close_cycles = closes && check.spanning;
  return check;
}

std::vector<std::vector<int>> chains(const Lattice& lattice, int mu) {
  if (mu < 0 || mu >= lattice.d()) throw InvalidArgument("chains: direction out of range");
  std::vector<std::vector<int>> out;
  for (int s = 0; s < lattice.num_sites(); ++s) {
    if (lattice.coord(s)[mu] != 1) continue;
    std::vector<int> run;
    for (int x = s; lattice.neighbor(x, mu) >= 0; x = lattice.neighbor(x, mu)) run.push_back(lattice.bond_index(x, mu));
    out.push_back(std::move(run));
  }
  return out;
}

}  // namespace latstab
