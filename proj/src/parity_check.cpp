#include "sparesim/parity_check.hpp"

#include <algorithm>

namespace sparesim {

ParityCheckStructure::ParityCheckStructure(const ArrayScheme& scheme) {
    if (scheme.kind() != SchemeKind::two_d)
        throw std::invalid_argument("parity-check structure is defined for two-dimensional schemes");
    rows_ = scheme.stripe_count();
    columns_.reserve(scheme.total_disks());
    for (const auto& p : scheme.positions()) {
        if (p.role == DiskPosition::Role::data)
            columns_.push_back((std::uint64_t{1} << (p.a - 1)) | (std::uint64_t{1} << (p.b - 1)));
        else
            columns_.push_back(std::uint64_t{1} << (p.a - 1));
    }
}

bool ParityCheckStructure::independent(std::span<const int> position_indices) const {
    Gf2Basis basis;
    for (int idx : position_indices)
        if (!basis.insert(columns_[idx])) return false;
    return true;
}

RecoveryOracle::RecoveryOracle(const ArrayScheme& scheme) : scheme_(scheme) {
    if (scheme.kind() == SchemeKind::two_d) {
        columns_ = ParityCheckStructure(scheme).columns();
    } else {
        group_count_ = scheme.group_count();
        per_group_limit_ = scheme.parity_per_group();
        group_of_.resize(scheme.total_disks());
        for (int i = 0; i < scheme.total_disks(); ++i)
            group_of_[i] = static_cast<std::int16_t>(scheme.group_of(i));
        group_load_.resize(group_count_);
    }
}

bool RecoveryOracle::recoverable(std::span<const int> erased_indices) const {
    if (!columns_.empty()) {
        basis_.clear();
        for (int idx : erased_indices)
            if (!basis_.insert(columns_[idx])) return false;
        return true;
    }
    bool ok = true;
    for (int idx : erased_indices) {
        if (++group_load_[group_of_[idx]] > per_group_limit_) {
            ok = false;
            break;
        }
    }
    for (int idx : erased_indices) group_load_[group_of_[idx]] = 0;
    return ok;
}

bool is_recoverable(const ArrayScheme& scheme, const ErasurePattern& erased) {
    return RecoveryOracle(scheme).recoverable(erased.indices());
}

bool peel_recoverable(const ArrayScheme& scheme, std::span<const int> erased_indices) {
    if (scheme.kind() != SchemeKind::two_d)
        throw std::invalid_argument("peeling decoder is defined for two-dimensional schemes");
    const int n = scheme.stripe_count();
    if (erased_indices.size() > 64)
        throw std::invalid_argument("peeling cross-check supports at most 64 erasures");

    // Per-stripe erasure load; each erased position remembers its stripes.
    // Stripes are 0-based here; position labels are 1-based.
    std::vector<int> load(n, 0);
    std::vector<std::uint64_t> stripe_members(n, 0);  // bit e = erased_indices[e]
    std::vector<std::uint64_t> stripes_of(erased_indices.size(), 0);
    for (std::size_t e = 0; e < erased_indices.size(); ++e) {
        DiskPosition p = scheme.position_at(erased_indices[e]);
        auto touch = [&](int stripe) {
            ++load[stripe];
            stripe_members[stripe] |= std::uint64_t{1} << e;
            stripes_of[e] |= std::uint64_t{1} << stripe;
        };
        touch(p.a - 1);
        if (p.role == DiskPosition::Role::data) touch(p.b - 1);
    }

    std::size_t remaining = erased_indices.size();
    bool progressed = true;
    while (remaining > 0 && progressed) {
        progressed = false;
        for (int s = 0; s < n; ++s) {
            if (load[s] != 1) continue;
            int e = std::countr_zero(stripe_members[s]);
            std::uint64_t stripes = stripes_of[e];
            while (stripes != 0) {
                int t = std::countr_zero(stripes);
                stripes &= stripes - 1;
                --load[t];
                stripe_members[t] &= ~(std::uint64_t{1} << e);
            }
            --remaining;
            progressed = true;
        }
    }
    return remaining == 0;
}

}  // namespace sparesim
