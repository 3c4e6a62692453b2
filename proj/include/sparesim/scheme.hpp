#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparesim {

// One disk slot in an array layout. Two-dimensional arrays have data
// positions D(i,j) sitting at the intersection of parity stripes i and j
// (1 <= i < j <= n) and one parity position P(i) per stripe. Group layouts
// (RAID-6 or triple parity) address slots as (group, slot).
struct DiskPosition {
    enum class Role : std::uint8_t { data, parity, group_member };

    Role role = Role::data;
    int a = 0;  // data: lower stripe; parity: stripe; group_member: group
    int b = 0;  // data: higher stripe; group_member: slot

    static DiskPosition data(int i, int j) {
        if (i == j) throw std::invalid_argument("data position needs two distinct stripes");
        if (i > j) std::swap(i, j);
        return {Role::data, i, j};
    }
    static DiskPosition parity(int i) { return {Role::parity, i, 0}; }
    static DiskPosition group_member(int g, int k) { return {Role::group_member, g, k}; }

    bool operator==(const DiskPosition&) const = default;

    std::string label() const;
};

enum class SchemeKind { two_d, raid6_groups, triple_parity_groups };

// Array organization under study: a complete two-dimensional array with n
// parity stripes, or m identical groups of n disks carrying the equivalent
// of 2 (RAID-6) or 3 (triple parity) parity disks each.
class ArrayScheme {
  public:
    ArrayScheme() : ArrayScheme(SchemeKind::two_d, 0, 3) {}

    static ArrayScheme two_d(int parity_stripes);
    static ArrayScheme raid6_groups(int groups, int disks_per_group);
    static ArrayScheme triple_parity_groups(int groups, int disks_per_group);

    SchemeKind kind() const { return kind_; }
    bool is_grouped() const { return kind_ != SchemeKind::two_d; }

    // n: parity stripes for two_d, disks per group otherwise.
    int stripe_count() const { return n_; }
    int group_size() const { return n_; }
    int group_count() const { return m_; }

    int total_disks() const;
    int data_disks() const;
    int parity_disks() const;  // parity-equivalent count for grouped layouts
    int parity_per_group() const;

    // n_f: number of simultaneous failures always tolerated.
    int tolerated() const;

    std::vector<DiskPosition> positions() const;
    int index_of(const DiskPosition& p) const;
    DiskPosition position_at(int index) const;
    int group_of(int index) const;

    // Compact descriptor, e.g. "twod:10", "raid6:2x12", "tp:3x15".
    std::string describe() const;
    static ArrayScheme parse(const std::string& descriptor);

    bool operator==(const ArrayScheme&) const = default;

  private:
    ArrayScheme(SchemeKind kind, int m, int n) : kind_(kind), m_(m), n_(n) {}

    SchemeKind kind_;
    int m_;  // group count (grouped layouts only)
    int n_;
};

// Set of simultaneously unreadable positions, stored as sorted unique
// position indices of a scheme.
class ErasurePattern {
  public:
    ErasurePattern() = default;
    ErasurePattern(const ArrayScheme& scheme, std::vector<int> indices);
    ErasurePattern(const ArrayScheme& scheme, const std::vector<DiskPosition>& positions);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }

  private:
    std::vector<int> indices_;
};

}  // namespace sparesim
