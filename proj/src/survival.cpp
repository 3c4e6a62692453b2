#include "sparesim/survival.hpp"

#include "sparesim/rng.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace sparesim {

namespace {

// Counts recoverable k-subsets of [0,N) whose smallest element is `first`.
// Predicate sees the whole subset each time; k stays tiny (<= 6).
template <typename Pred>
std::uint64_t count_with_first(int total, int k, int first, Pred&& pred) {
    std::vector<int> idx(k);
    idx[0] = first;
    for (int i = 1; i < k; ++i) idx[i] = first + i;
    if (idx[k - 1] >= total) return 0;
    std::uint64_t survivors = 0;
    std::span<const int> view(idx);
    for (;;) {
        if (pred(view)) ++survivors;
        int i = k - 1;
        while (i >= 1 && idx[i] == total - k + i) --i;
        if (i == 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return survivors;
}

struct RankPred {
    const std::vector<std::uint64_t>* columns = nullptr;
    Gf2Basis basis{};
    bool operator()(std::span<const int> subset) {
        basis.clear();
        for (int p : subset)
            if (!basis.insert((*columns)[p])) return false;
        return true;
    }
};

struct GroupPred {
    int group_size;
    int limit;
    int loads[8] = {};
    int used[8] = {};
    bool operator()(std::span<const int> subset) {
        int n_used = 0;
        bool ok = true;
        for (int p : subset) {
            int g = p / group_size;
            if (loads[g]++ == 0) used[n_used++] = g;
            if (loads[g] > limit) {
                ok = false;
                break;
            }
        }
        for (int i = 0; i < n_used; ++i) loads[used[i]] = 0;
        return ok;
    }
};

template <typename PredFactory>
std::uint64_t count_exhaustive(int total, int k, int threads, PredFactory make_pred) {
    if (threads <= 1) {
        auto pred = make_pred();
        std::uint64_t survivors = 0;
        for (int first = 0; first + k <= total; ++first)
            survivors += count_with_first(total, k, first, pred);
        return survivors;
    }
    // Partition by smallest element; any interleaving sums to the same
    // total, so the result is independent of the partitioning.
    std::atomic<int> next_first{0};
    std::atomic<std::uint64_t> survivors{0};
    auto work = [&] {
        auto pred = make_pred();
        std::uint64_t local = 0;
        for (;;) {
            int first = next_first.fetch_add(1);
            if (first + k > total) break;
            local += count_with_first(total, k, first, pred);
        }
        survivors.fetch_add(local);
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return survivors.load();
}

int bounded_uniform(Xoshiro256pp& rng, int lo, int hi) {  // [lo, hi)
    return lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(hi - lo));
}

struct StratumEstimate {
    Rational weight;      // C(N-1-first, k-1) / C(N, k)
    std::uint64_t draws = 0;
    std::uint64_t survivors = 0;
};

// Stratified sampling over the smallest subset element with allocation
// proportional to each stratum's pattern count; unbiased for any
// allocation since strata are estimated independently.
template <typename Pred>
LevelCount sample_level(int total, int k, const BigInt& patterns, const EnumerationOptions& opts,
                        Pred&& pred) {
    const int strata = total - k + 1;
    std::vector<StratumEstimate> layers(strata);
    std::vector<std::pair<Rational, int>> remainders;
    std::uint64_t allocated = 0;
    for (int f = 0; f < strata; ++f) {
        layers[f].weight = Rational(binomial(total - 1 - f, k - 1), patterns);
        Rational share = Rational(opts.sample_count) * layers[f].weight;
        BigInt whole = boost::multiprecision::numerator(share) /
                       boost::multiprecision::denominator(share);
        layers[f].draws = whole.convert_to<std::uint64_t>();
        allocated += layers[f].draws;
        remainders.emplace_back(share - Rational(whole), f);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; allocated < opts.sample_count && i < remainders.size(); ++i, ++allocated)
        ++layers[remainders[i].second].draws;
    for (auto& layer : layers)
        if (layer.draws == 0) layer.draws = 1;

    std::vector<int> subset(k);
    for (int f = 0; f < strata; ++f) {
        auto rng = substream(opts.sample_seed, static_cast<std::uint64_t>(k), f);
        for (std::uint64_t d = 0; d < layers[f].draws; ++d) {
            // Floyd's algorithm: k-1 distinct draws from (f, total).
            subset[0] = f;
            int chosen = 1;
            for (int t = total - (k - 1); t < total; ++t) {
                int r = bounded_uniform(rng, f + 1, t + 1);
                bool dup = false;
                for (int i = 1; i < chosen; ++i) dup |= (subset[i] == r);
                subset[chosen++] = dup ? t : r;
            }
            if (pred(std::span<const int>(subset))) ++layers[f].survivors;
        }
    }

    Rational fraction = 0;
    double variance = 0.0;
    for (const auto& layer : layers) {
        Rational p_hat(layer.survivors, layer.draws);
        fraction += layer.weight * p_hat;
        double w = to_double(layer.weight);
        double p = to_double(p_hat);
        variance += w * w * p * (1.0 - p) / static_cast<double>(layer.draws);
    }
    LevelCount out;
    out.patterns = patterns;
    out.fraction = fraction;
    out.sampled = true;
    out.std_error = std::sqrt(variance);
    Rational scaled = fraction * Rational(patterns);
    out.survivors = boost::multiprecision::numerator(scaled) /
                    boost::multiprecision::denominator(scaled);
    return out;
}

template <typename PredFactory>
LevelCount count_level(const ArrayScheme& scheme, int k, const EnumerationOptions& opts,
                       PredFactory make_pred) {
    const int total = scheme.total_disks();
    LevelCount out;
    out.patterns = binomial(total, k);
    if (out.patterns == 0) {
        out.survivors = 0;
        out.fraction = 0;
        return out;
    }
    if (k == 0) {
        out.survivors = 1;  // the empty pattern is always recoverable
        out.fraction = 1;
        return out;
    }
    if (out.patterns <= BigInt(opts.subset_budget)) {
        int threads = opts.threads > 0 ? opts.threads
                                       : static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
        // below ~1e6 subsets the thread spawn costs more than the scan
        if (out.patterns <= 1'000'000) threads = 1;
        out.survivors = count_exhaustive(total, k, threads, make_pred);
        out.fraction = Rational(out.survivors, out.patterns);
        return out;
    }
    if (!opts.allow_sampling)
        throw EnumerationBudgetError(
            "exhaustive enumeration of " + scheme.describe() + " at " + std::to_string(k) +
                " failures needs " + out.patterns.str() + " subsets, over the budget of " +
                std::to_string(opts.subset_budget) + "; enable sampling to estimate",
            out.patterns);
    auto pred = make_pred();
    return sample_level(total, k, out.patterns, opts, pred);
}

}  // namespace

LevelCount count_recoverable(const ArrayScheme& scheme, int k, const EnumerationOptions& opts) {
    if (k < 0 || k > scheme.total_disks())
        throw std::invalid_argument("count_recoverable: k outside [0, N]");
    if (scheme.kind() == SchemeKind::two_d) {
        ParityCheckStructure pcs(scheme);
        auto columns = pcs.columns();
        return count_level(scheme, k, opts, [&columns] { return RankPred{&columns}; });
    }
    if (scheme.group_count() > 8) {
        // GroupPred keeps per-group loads in fixed storage; grow if ever needed
        throw std::invalid_argument("enumeration supports at most 8 groups");
    }
    int gs = scheme.group_size();
    int limit = scheme.parity_per_group();
    return count_level(scheme, k, opts, [gs, limit] { return GroupPred{gs, limit}; });
}

SurvivalProfile survival_profile(const ArrayScheme& scheme, const EnumerationOptions& opts) {
    SurvivalProfile profile;
    profile.size = scheme.total_disks();
    profile.tolerated = scheme.tolerated();
    for (int j = 1; j <= 3; ++j) {
        int k = profile.tolerated + j;
        if (k > profile.size) {
            profile.survivable[j - 1] = 0;
            continue;
        }
        LevelCount level = count_recoverable(scheme, k, opts);
        profile.survivable[j - 1] = level.fraction;
        profile.sampled[j - 1] = level.sampled;
        profile.std_error[j - 1] = level.std_error;
    }
    return profile;
}

std::uint64_t fatal_triple_count_closed(int n) {
    if (n < 3) throw std::invalid_argument("fatal_triple_count_closed: need n >= 3");
    return (binomial(n, 2) + binomial(n, 3)).convert_to<std::uint64_t>();
}

}  // namespace sparesim
