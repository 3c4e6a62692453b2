#include "sparesim/sim.hpp"

#include "sparesim/parity_check.hpp"
#include "sparesim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace sparesim {

void SimConfig::validate() const {
    if (!(mission_years > 0.0)) throw std::invalid_argument("mission must be positive");
    if (!(repair_years >= 0.0)) throw std::invalid_argument("repair time must be >= 0");
    if (runs < 1) throw std::invalid_argument("need at least one run");
    if (spares && *spares < 0) throw std::invalid_argument("spare count must be >= 0");
    FailureSampler{bathtub, interp};  // surfaces bad rate/interpretation combinations
    if (loss_mode == LossMode::profile) {
        if (!profile) throw std::invalid_argument("profile mode needs a survival profile");
        if (profile->size != scheme.total_disks())
            throw std::invalid_argument("survival profile size disagrees with the scheme");
        if (profile->tolerated != scheme.tolerated())
            throw std::invalid_argument("survival profile tolerance disagrees with the scheme");
        for (int j = 0; j < 3; ++j) {
            const Rational& f = profile->survivable[j];
            if (f < 0 || f > 1)
                throw std::invalid_argument("survival fractions must lie in [0,1]");
            if (j > 0 && f > profile->survivable[j - 1])
                throw std::invalid_argument("survival fractions must be nonincreasing");
        }
    }
}

namespace {

enum : std::uint8_t { ev_failure = 0, ev_rebuild_done = 1 };

struct Event {
    double time;
    std::uint32_t seq;
    std::int32_t pos;
    std::uint32_t epoch;  // rebuild completions only
    std::uint8_t kind;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;
    }
};

// Immutable per-campaign state shared by all workers.
struct CampaignContext {
    const SimConfig& cfg;
    FailureSampler sampler;
    double mission;
    double repair;
    double skip_u;  // draws below this mean the disk outlives the mission
    int total_positions;
    bool grouped;
    // exact mode, two-dimensional
    std::vector<std::uint64_t> columns;
    // exact mode, grouped
    std::vector<std::int16_t> group_of;
    int group_limit = 0;
    int group_count = 0;
    // profile mode: conditional survival probability at each level above n_f
    bool profile_mode;
    int tolerated;
    double conditional[3] = {0.0, 0.0, 0.0};

    explicit CampaignContext(const SimConfig& config)
        : cfg(config),
          sampler(config.bathtub, config.interp),
          mission(config.mission_years),
          repair(config.repair_years),
          skip_u(sampler.survival_probability(config.mission_years)),
          total_positions(config.scheme.total_disks()),
          grouped(config.scheme.is_grouped()),
          profile_mode(config.loss_mode == LossMode::profile),
          tolerated(config.scheme.tolerated()) {
        if (profile_mode) {
            const SurvivalProfile& p = *config.profile;
            double prev = 1.0;
            for (int j = 0; j < 3; ++j) {
                double f = to_double(p.survivable[j]);
                conditional[j] = prev > 0.0 ? f / prev : 0.0;
                prev = f;
            }
        } else if (grouped) {
            const ArrayScheme& s = config.scheme;
            group_of.resize(total_positions);
            for (int i = 0; i < total_positions; ++i)
                group_of[i] = static_cast<std::int16_t>(s.group_of(i));
            group_limit = s.parity_per_group();
            group_count = s.group_count();
        } else {
            columns = ParityCheckStructure(config.scheme).columns();
        }
    }
};

// Mutable scratch owned by one worker; reused across runs.
struct RunWorkspace {
    std::vector<Event> heap;
    std::vector<std::uint32_t> epoch;     // never reset: equality tokens only
    std::vector<std::uint8_t> erased;     // per-position flag
    std::vector<int> erased_list;         // positions currently erased
    std::vector<int> group_load;
    Gf2Basis basis;

    explicit RunWorkspace(const CampaignContext& ctx)
        : epoch(ctx.total_positions, 0),
          erased(ctx.total_positions, 0),
          group_load(ctx.group_count, 0) {
        heap.reserve(64);
        erased_list.reserve(16);
    }
};

struct SparePool {
    const CampaignContext& ctx;
    Xoshiro256pp rng;      // role-1 substream: spare lifetimes in id order
    std::int64_t remaining;  // -1 = unlimited

    // Scans the pool in id order for a spare still alive at `now`; idle
    // spares found dead are discarded. Returns the committed spare's
    // failure time (infinity when it outlives the mission), or nothing
    // when the pool is exhausted.
    std::optional<double> commit(double now) {
        while (remaining != 0) {
            if (remaining > 0) --remaining;
            double u = rng.next_open01();
            if (u < ctx.skip_u) return std::numeric_limits<double>::infinity();
            double t = ctx.sampler.sample(0.0, u);
            if (t > now) return t;
        }
        return std::nullopt;
    }
};

RunOutcome run_one(const CampaignContext& ctx, RunWorkspace& ws, std::uint64_t run_index) {
    const SimConfig& cfg = ctx.cfg;
    RunOutcome out;

    ws.heap.clear();
    std::uint32_t seq = 0;
    auto push = [&](double time, std::int32_t pos, std::uint8_t kind, std::uint32_t ep) {
        ws.heap.push_back(Event{time, seq++, pos, ep, kind});
        std::push_heap(ws.heap.begin(), ws.heap.end(), EventAfter{});
    };

    // Role 0: initial lifetimes of the disks populating the positions.
    Xoshiro256pp active_rng = substream(cfg.seed, run_index, 0);
    for (int p = 0; p < ctx.total_positions; ++p) {
        double u = active_rng.next_open01();
        if (u < ctx.skip_u) continue;  // outlives the mission
        push(ctx.sampler.sample(0.0, u), p, ev_failure, 0);
    }
    SparePool pool{ctx, substream(cfg.seed, run_index, 1),
                   cfg.spares ? *cfg.spares : std::int64_t{-1}};
    // Role 2: profile-mode survival draws.
    Xoshiro256pp survival_rng = substream(cfg.seed, run_index, 2);

    int erased_count = 0;
    bool pool_known_empty = false;

    auto note_erased = [&](int pos) {
        ws.erased[pos] = 1;
        ws.erased_list.push_back(pos);
        ++erased_count;
        if (erased_count > out.peak_concurrent_failures)
            out.peak_concurrent_failures = erased_count;
    };
    auto clear_run_state = [&] {
        for (int pos : ws.erased_list) {
            ws.erased[pos] = 0;
            if (!ctx.profile_mode && ctx.grouped) ws.group_load[ctx.group_of[pos]] = 0;
        }
        ws.erased_list.clear();
    };

    // Loss check for a set that just grew by `pos`; true means data loss.
    auto fatal_after = [&](int pos) -> bool {
        if (ctx.profile_mode) {
            int over = erased_count - ctx.tolerated;
            if (over <= 0) return false;
            if (over > 3) return true;
            return survival_rng.next_open01() >= ctx.conditional[over - 1];
        }
        if (ctx.grouped) return ++ws.group_load[ctx.group_of[pos]] > ctx.group_limit;
        ws.basis.clear();
        for (int idx : ws.erased_list)
            if (!ws.basis.insert(ctx.columns[idx])) return true;
        return false;
    };

    // Repair need at `now`: commit a spare or fall back to the exhaustion
    // policy. Returns false when the run ends in a policy loss.
    auto request_repair = [&](int pos, double now) -> bool {
        std::optional<double> lifetime =
            pool_known_empty ? std::nullopt : pool.commit(now);
        if (!lifetime) {
            pool_known_empty = true;
            if (!out.spares_exhausted_at) out.spares_exhausted_at = now;
            if (cfg.exhaustion == ExhaustionPolicy::immediate_loss) {
                out.survived = false;
                out.loss_time = now;
                out.trigger = LossTrigger::policy_exhaustion;
                return false;
            }
            return true;  // position stays erased for the rest of the mission
        }
        if (*lifetime < ctx.mission) push(*lifetime, pos, ev_failure, 0);
        push(now + ctx.repair, pos, ev_rebuild_done, ws.epoch[pos]);
        return true;
    };

    while (!ws.heap.empty()) {
        Event ev = ws.heap.front();
        if (ev.time >= ctx.mission) break;
        std::pop_heap(ws.heap.begin(), ws.heap.end(), EventAfter{});
        ws.heap.pop_back();

        if (ev.kind == ev_rebuild_done) {
            if (ws.epoch[ev.pos] != ev.epoch) continue;  // occupant died; rebuild restarted
            ws.erased[ev.pos] = 0;
            --erased_count;
            auto it = std::find(ws.erased_list.begin(), ws.erased_list.end(), ev.pos);
            *it = ws.erased_list.back();
            ws.erased_list.pop_back();
            if (!ctx.profile_mode && ctx.grouped) --ws.group_load[ctx.group_of[ev.pos]];
            continue;
        }

        // Failure of the disk occupying ev.pos. Invalidate any pending
        // rebuild completion for the position.
        ++ws.epoch[ev.pos];
        if (!ws.erased[ev.pos]) {
            note_erased(ev.pos);
            if (fatal_after(ev.pos)) {
                out.survived = false;
                out.loss_time = ev.time;
                out.trigger = LossTrigger::fatal_pattern;
                break;
            }
        }
        // else: the disk died mid-rebuild; the erased set is unchanged, so
        // the loss verdict cannot change — only the repair restarts.
        if (!request_repair(ev.pos, ev.time)) break;
    }

    clear_run_state();
    return out;
}

int resolve_workers(int workers, std::uint64_t runs) {
    if (workers <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    if (static_cast<std::uint64_t>(workers) > runs) workers = static_cast<int>(runs);
    return std::max(workers, 1);
}

}  // namespace

RunOutcome simulate_run(const SimConfig& config, std::uint64_t run_index) {
    config.validate();
    CampaignContext ctx(config);
    RunWorkspace ws(ctx);
    return run_one(ctx, ws, run_index);
}

ReliabilityEstimate simulate(const SimConfig& config, int workers,
                             const std::atomic<bool>* cancel) {
    config.validate();
    CampaignContext ctx(config);
    const std::uint64_t runs = config.runs;
    const int n_workers = resolve_workers(workers, runs);

    std::atomic<std::uint64_t> next_run{0};
    std::atomic<std::uint64_t> losses{0};
    std::atomic<std::uint64_t> exhaustions{0};
    std::atomic<std::uint64_t> peak_sum{0};
    std::atomic<bool> cancelled{false};

    const std::uint64_t chunk =
        std::clamp<std::uint64_t>(runs / (static_cast<std::uint64_t>(n_workers) * 16), 1024, 65536);

    auto work = [&] {
        RunWorkspace ws(ctx);
        std::uint64_t local_losses = 0, local_exhaustions = 0, local_peak = 0;
        for (;;) {
            if (cancel && cancel->load(std::memory_order_relaxed)) {
                cancelled.store(true);
                break;
            }
            std::uint64_t begin = next_run.fetch_add(chunk);
            if (begin >= runs) break;
            std::uint64_t end = std::min(begin + chunk, runs);
            for (std::uint64_t r = begin; r < end; ++r) {
                RunOutcome o = run_one(ctx, ws, r);
                local_losses += o.survived ? 0 : 1;
                local_exhaustions += o.spares_exhausted_at ? 1 : 0;
                local_peak += static_cast<std::uint64_t>(o.peak_concurrent_failures);
            }
        }
        losses.fetch_add(local_losses);
        exhaustions.fetch_add(local_exhaustions);
        peak_sum.fetch_add(local_peak);
    };

    if (n_workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (cancelled.load()) throw CancelledError();

    double mean_peak = static_cast<double>(peak_sum.load()) / static_cast<double>(runs);
    return estimate_reliability(runs, losses.load(), exhaustions.load(), mean_peak);
}

SpareSearchResult min_spares_for_target(const SimConfig& base, double target_nines, int workers) {
    if (!(target_nines >= 0.0))
        throw std::invalid_argument("min_spares_for_target: target must be >= 0");
    SpareSearchResult result;

    auto probe = [&](std::optional<std::int64_t> spares) -> const ReliabilityEstimate& {
        SimConfig cfg = base;
        cfg.spares = spares;
        result.trace.push_back({spares, simulate(cfg, workers)});
        return result.trace.back().estimate;
    };
    auto meets = [&](const ReliabilityEstimate& est) { return est.nines_ci.low >= target_nines; };

    if (!meets(probe(std::nullopt))) return result;  // unreachable even with unlimited spares

    if (meets(probe(0))) {
        result.reachable = true;
        result.min_spares = 0;
        return result;
    }
    std::int64_t lo = 0;  // known failing
    std::int64_t hi = 1;
    for (;;) {
        if (meets(probe(hi))) break;
        lo = hi;
        hi *= 2;
        // With the shared spare-lifetime streams a finite pool reproduces
        // the unlimited outcome once it covers every run's demand, so the
        // doubling must terminate; the cap only guards a broken coupling.
        if (hi > (std::int64_t{1} << 32))
            throw std::logic_error("spare search exceeded 2^32 without matching unlimited pool");
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (meets(probe(mid)))
            hi = mid;
        else
            lo = mid;
    }
    result.reachable = true;
    result.min_spares = hi;
    return result;
}

}  // namespace sparesim
