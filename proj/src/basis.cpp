#include "usctopo/basis.hpp"

#include <bit>
#include <string>

#include "usctopo/errors.hpp"

namespace usctopo {

namespace {

void check_site(int site, int n_sites) {
  if (site < 1 || site > n_sites) {
    throw DomainError("site " + std::to_string(site) + " outside 1.." + std::to_string(n_sites));
  }
}

}  // namespace

int popcount(Mask mask) { return std::popcount(mask); }

BasisIndex::BasisIndex(Mask mask, int n_sites) : mask_(mask), n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 31) {
    throw SizeError("n_sites must lie in 1..31, got " + std::to_string(n_sites));
  }
  if (mask >> n_sites != 0) {
    throw DomainError("mask " + std::to_string(mask) + " does not fit in " +
                      std::to_string(n_sites) + " sites");
  }
}

int BasisIndex::excitations() const { return popcount(mask_); }

bool BasisIndex::excited(int site) const {
  check_site(site, n_sites_);
  return (mask_ >> (site - 1)) & 1u;
}

std::span<const Mask> SectorTable::sector_members(int sector) const {
  if (sector < 0 || sector > n_sites_) {
    throw DomainError("sector " + std::to_string(sector) + " outside 0.." +
                      std::to_string(n_sites_));
  }
  return members_[static_cast<std::size_t>(sector)];
}

SectorRank SectorTable::rank(Mask mask) const {
  if (mask >= dim()) throw DomainError("mask " + std::to_string(mask) + " outside basis");
  return rank_[mask];
}

std::vector<Mask> SectorTable::sector_ordered_masks() const {
  std::vector<Mask> out;
  out.reserve(dim());
  for (const auto& sector : members_) out.insert(out.end(), sector.begin(), sector.end());
  return out;
}

SectorTable build_basis(int n_sites) {
  if (n_sites < 1 || n_sites > kMaxDenseSites) {
    throw SizeError("n_sites=" + std::to_string(n_sites) + " outside dense range 1.." +
                    std::to_string(kMaxDenseSites) +
                    "; reduce N or use a sector-restricted workflow");
  }
  SectorTable table;
  table.n_sites_ = n_sites;
  table.members_.resize(static_cast<std::size_t>(n_sites) + 1);
  table.rank_.resize(std::size_t{1} << n_sites);
  for (Mask m = 0; m < (Mask{1} << n_sites); ++m) {
    auto& sector = table.members_[static_cast<std::size_t>(popcount(m))];
    table.rank_[m] = {popcount(m), static_cast<int>(sector.size())};
    sector.push_back(m);
  }
  for (const auto& sector : table.members_) table.sizes_.push_back(sector.size());
  return table;
}

std::optional<std::pair<BasisIndex, double>> apply_lowering(const BasisIndex& state, int site) {
  check_site(site, state.n_sites());
  const Mask bit = Mask{1} << (site - 1);
  if ((state.mask() & bit) == 0) return std::nullopt;
  return std::pair{BasisIndex(state.mask() & ~bit, state.n_sites()), 1.0};
}

std::optional<std::pair<BasisIndex, double>> apply_raising(const BasisIndex& state, int site) {
  check_site(site, state.n_sites());
  const Mask bit = Mask{1} << (site - 1);
  if ((state.mask() & bit) != 0) return std::nullopt;
  return std::pair{BasisIndex(state.mask() | bit, state.n_sites()), 1.0};
}

int parity(const BasisIndex& state) { return state.excitations() % 2 == 0 ? 1 : -1; }

std::string bare_state_label(Mask mask, int n_sites) {
  std::string out;
  for (int site = 1; site <= n_sites; ++site) {
    if (site > 1) out += ',';
    out += ((mask >> (site - 1)) & 1u) ? '1' : '0';
  }
  return out;
}

}  // namespace usctopo
