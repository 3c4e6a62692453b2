#include "sparesim/scheme.hpp"

#include <algorithm>
#include <charconv>

namespace sparesim {

std::string DiskPosition::label() const {
    switch (role) {
        case Role::data:
            return "D_" + std::to_string(a) + std::to_string(b);
        case Role::parity:
            return "P_" + std::to_string(a);
        case Role::group_member:
            return "G" + std::to_string(a) + "." + std::to_string(b);
    }
    return {};
}

ArrayScheme ArrayScheme::two_d(int parity_stripes) {
    if (parity_stripes < 3)
        throw std::invalid_argument("two_d: need at least 3 parity stripes for intersections");
    if (parity_stripes > 64)
        throw std::invalid_argument("two_d: stripe count above 64 not supported");
    return {SchemeKind::two_d, 0, parity_stripes};
}

ArrayScheme ArrayScheme::raid6_groups(int groups, int disks_per_group) {
    if (groups < 1) throw std::invalid_argument("raid6_groups: need at least one group");
    if (disks_per_group < 3)
        throw std::invalid_argument("raid6_groups: group must exceed its 2 parity equivalents");
    return {SchemeKind::raid6_groups, groups, disks_per_group};
}

ArrayScheme ArrayScheme::triple_parity_groups(int groups, int disks_per_group) {
    if (groups < 1) throw std::invalid_argument("triple_parity_groups: need at least one group");
    if (disks_per_group < 4)
        throw std::invalid_argument(
            "triple_parity_groups: group must exceed its 3 parity equivalents");
    return {SchemeKind::triple_parity_groups, groups, disks_per_group};
}

int ArrayScheme::total_disks() const {
    if (kind_ == SchemeKind::two_d) return n_ * (n_ + 1) / 2;
    return m_ * n_;
}

int ArrayScheme::parity_per_group() const {
    switch (kind_) {
        case SchemeKind::raid6_groups: return 2;
        case SchemeKind::triple_parity_groups: return 3;
        case SchemeKind::two_d: break;
    }
    throw std::logic_error("parity_per_group: not a grouped scheme");
}

int ArrayScheme::parity_disks() const {
    if (kind_ == SchemeKind::two_d) return n_;
    return m_ * parity_per_group();
}

int ArrayScheme::data_disks() const { return total_disks() - parity_disks(); }

int ArrayScheme::tolerated() const {
    return kind_ == SchemeKind::triple_parity_groups ? 3 : 2;
}

std::vector<DiskPosition> ArrayScheme::positions() const {
    std::vector<DiskPosition> out;
    out.reserve(total_disks());
    if (kind_ == SchemeKind::two_d) {
        for (int i = 1; i <= n_; ++i)
            for (int j = i + 1; j <= n_; ++j) out.push_back(DiskPosition::data(i, j));
        for (int i = 1; i <= n_; ++i) out.push_back(DiskPosition::parity(i));
    } else {
        for (int g = 0; g < m_; ++g)
            for (int k = 0; k < n_; ++k) out.push_back(DiskPosition::group_member(g, k));
    }
    return out;
}

int ArrayScheme::index_of(const DiskPosition& p) const {
    if (kind_ == SchemeKind::two_d) {
        if (p.role == DiskPosition::Role::data) {
            int i = p.a, j = p.b;
            if (i < 1 || j <= i || j > n_) throw std::out_of_range("data position outside scheme");
            // data positions ordered (1,2),(1,3),...,(1,n),(2,3),...
            return (i - 1) * (2 * n_ - i) / 2 + (j - i - 1);
        }
        if (p.role == DiskPosition::Role::parity) {
            if (p.a < 1 || p.a > n_) throw std::out_of_range("parity position outside scheme");
            return n_ * (n_ - 1) / 2 + (p.a - 1);
        }
        throw std::out_of_range("group position in a two-dimensional scheme");
    }
    if (p.role != DiskPosition::Role::group_member)
        throw std::out_of_range("non-group position in a grouped scheme");
    if (p.a < 0 || p.a >= m_ || p.b < 0 || p.b >= n_)
        throw std::out_of_range("group position outside scheme");
    return p.a * n_ + p.b;
}

DiskPosition ArrayScheme::position_at(int index) const {
    if (index < 0 || index >= total_disks()) throw std::out_of_range("position index");
    if (kind_ == SchemeKind::two_d) {
        int data_count = n_ * (n_ - 1) / 2;
        if (index >= data_count) return DiskPosition::parity(index - data_count + 1);
        int i = 1;
        while (index >= n_ - i) {
            index -= n_ - i;
            ++i;
        }
        return DiskPosition::data(i, i + 1 + index);
    }
    return DiskPosition::group_member(index / n_, index % n_);
}

int ArrayScheme::group_of(int index) const {
    if (kind_ == SchemeKind::two_d) throw std::logic_error("group_of: not a grouped scheme");
    return index / n_;
}

std::string ArrayScheme::describe() const {
    switch (kind_) {
        case SchemeKind::two_d: return "twod:" + std::to_string(n_);
        case SchemeKind::raid6_groups:
            return "raid6:" + std::to_string(m_) + "x" + std::to_string(n_);
        case SchemeKind::triple_parity_groups:
            return "tp:" + std::to_string(m_) + "x" + std::to_string(n_);
    }
    return {};
}

namespace {

int parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer in scheme descriptor");
    return value;
}

}  // namespace

ArrayScheme ArrayScheme::parse(const std::string& descriptor) {
    auto colon = descriptor.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("scheme descriptor needs kind:params, got '" + descriptor + "'");
    std::string kind = descriptor.substr(0, colon);
    std::string params = descriptor.substr(colon + 1);
    if (kind == "twod") return two_d(parse_int(params));
    auto x = params.find('x');
    if (x == std::string::npos)
        throw std::invalid_argument("grouped scheme needs MxN, got '" + params + "'");
    int m = parse_int(std::string_view(params).substr(0, x));
    int n = parse_int(std::string_view(params).substr(x + 1));
    if (kind == "raid6") return raid6_groups(m, n);
    if (kind == "tp") return triple_parity_groups(m, n);
    throw std::invalid_argument("unknown scheme kind '" + kind + "'");
}

ErasurePattern::ErasurePattern(const ArrayScheme& scheme, std::vector<int> indices)
    : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw std::invalid_argument("erasure pattern contains duplicate positions");
    if (!indices_.empty() && (indices_.front() < 0 || indices_.back() >= scheme.total_disks()))
        throw std::invalid_argument("erasure pattern outside scheme positions");
}

ErasurePattern::ErasurePattern(const ArrayScheme& scheme,
                               const std::vector<DiskPosition>& positions) {
    indices_.reserve(positions.size());
    for (const auto& p : positions) indices_.push_back(scheme.index_of(p));
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw std::invalid_argument("erasure pattern contains duplicate positions");
}

}  // namespace sparesim
