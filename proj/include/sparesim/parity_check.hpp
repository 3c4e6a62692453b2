#pragma once

#include "sparesim/scheme.hpp"

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace sparesim {

// Binary parity-check structure of a two-dimensional array: one row per
// parity stripe, one column per position. The column of P(i) is the unit
// vector e_i, the column of D(i,j) is e_i + e_j. Columns are bit-packed
// into one word each (row r = bit r), which limits the stripe count to 64.
class ParityCheckStructure {
  public:
    explicit ParityCheckStructure(const ArrayScheme& scheme);

    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(columns_.size()); }
    std::uint64_t column(int position_index) const { return columns_[position_index]; }
    const std::vector<std::uint64_t>& columns() const { return columns_; }

    // True iff the given columns are linearly independent over GF(2).
    bool independent(std::span<const int> position_indices) const;

  private:
    int rows_;
    std::vector<std::uint64_t> columns_;
};

// Incremental GF(2) span tracker for bit-packed column words. insert()
// reduces the word against the current basis and absorbs it when nonzero.
class Gf2Basis {
  public:
    // Returns true when the word was independent of the span so far.
    bool insert(std::uint64_t word) {
        while (word != 0) {
            int bit = 63 - std::countl_zero(word);
            if (rows_[bit] == 0) {
                rows_[bit] = word;
                touched_[count_++] = bit;
                return true;
            }
            word ^= rows_[bit];
        }
        return false;
    }

    void clear() {
        for (int i = 0; i < count_; ++i) rows_[touched_[i]] = 0;
        count_ = 0;
    }

    int rank() const { return count_; }

  private:
    std::uint64_t rows_[64] = {};
    int touched_[64] = {};
    int count_ = 0;
};

// Erasure decodability oracle usable in hot loops: rank criterion for
// two-dimensional arrays, per-group threshold for grouped layouts.
class RecoveryOracle {
  public:
    explicit RecoveryOracle(const ArrayScheme& scheme);

    bool recoverable(std::span<const int> erased_indices) const;

    const ArrayScheme& scheme() const { return scheme_; }

  private:
    ArrayScheme scheme_;
    std::vector<std::uint64_t> columns_;  // two_d only
    std::vector<std::int16_t> group_of_;  // grouped only
    int group_count_ = 0;
    int per_group_limit_ = 0;
    mutable Gf2Basis basis_;
    mutable std::vector<int> group_load_;
};

// True iff the erased positions can be reconstructed: linear independence
// of the erased parity-check columns for two-dimensional arrays, at most
// 2 (RAID-6) or 3 (triple parity) erasures per group otherwise.
bool is_recoverable(const ArrayScheme& scheme, const ErasurePattern& erased);

// Iterative stripe repair for two-dimensional arrays: repeatedly rebuild
// any stripe with exactly one erasure. Declares a pattern recoverable only
// if every erasure peels off. Kept as a cross-check; the rank criterion is
// authoritative.
bool peel_recoverable(const ArrayScheme& scheme, std::span<const int> erased_indices);

}  // namespace sparesim
