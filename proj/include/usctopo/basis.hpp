#pragma once

// Bitmask Fock basis of N two-level systems.
//
// Site n (1-based, site 1 at the left end of the chain) maps to bit n-1 of the
// mask. The global basis index of a bare state is its mask value, so a
// 2^N x 2^N operator is laid out in plain lexicographic order of occupation
// bits. Sector-internal ordering is ascending mask.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace usctopo {

using Mask = std::uint32_t;

// Largest chain that dense diagonalization accepts.
inline constexpr int kMaxDenseSites = 14;
// Cap applied by sweeps and the CLI unless raised explicitly.
inline constexpr int kDefaultSiteCap = 12;

class BasisIndex {
 public:
  BasisIndex(Mask mask, int n_sites);

  Mask mask() const { return mask_; }
  int n_sites() const { return n_sites_; }
  int excitations() const;
  bool excited(int site) const;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;

 private:
  Mask mask_;
  int n_sites_;
};

struct SectorRank {
  int sector;
  int position;
};

class SectorTable {
 public:
  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return std::size_t{1} << n_sites_; }
  std::span<const std::size_t> sector_sizes() const { return sizes_; }
  std::span<const Mask> sector_members(int sector) const;
  SectorRank rank(Mask mask) const;

  // Basis masks ordered by sector, then mask.
  std::vector<Mask> sector_ordered_masks() const;

  friend SectorTable build_basis(int n_sites);

 private:
  int n_sites_ = 0;
  std::vector<std::size_t> sizes_;
  std::vector<std::vector<Mask>> members_;
  std::vector<SectorRank> rank_;
};

// Throws SizeError unless 1 <= n_sites <= kMaxDenseSites.
SectorTable build_basis(int n_sites);

// sigma_site acting on a bare state. Empty when the site is already empty.
// The phase is always +1: the operators are on-site, there is no sign string.
std::optional<std::pair<BasisIndex, double>> apply_lowering(const BasisIndex& state, int site);
std::optional<std::pair<BasisIndex, double>> apply_raising(const BasisIndex& state, int site);

// (-1)^excitations
int parity(const BasisIndex& state);

int popcount(Mask mask);

// Label "i,j,k,l" listing occupations of sites 1..N, as in |1,0,0,0>.
std::string bare_state_label(Mask mask, int n_sites);

}  // namespace usctopo
