#include "kellerscope/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <thread>
#include <tuple>

namespace kellerscope {

namespace {

void require_ascending(const std::vector<double>& values, const char* name, bool positive) {
    if (values.empty()) throw DomainError(std::string("sweep list '") + name + "' is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (positive && !(values[i] > 0.0))
            throw DomainError(std::string("sweep list '") + name + "' must be positive");
        if (i > 0 && !(values[i] > values[i - 1]))
            throw DomainError(std::string("sweep list '") + name + "' must be strictly ascending");
    }
}

int severity(Outcome o) {
    switch (o) {
    case Outcome::Bounded:
        return 0;
    case Outcome::Undecided:
        return 1;
    case Outcome::BlowUp:
        return 2;
    }
    return 1;
}

} // namespace

void validate(const SweepSpec& spec) {
    require_ascending(spec.chi_values, "chi", true);
    require_ascending(spec.mu_values, "mu", true);
    require_ascending(spec.p_values, "p", false);
    if (spec.repeat < 1) throw DomainError("sweep repeat must be >= 1");
    if (spec.domain.size() == 0) throw DomainError("sweep domain is not set");
    validate(spec.base_cfg);
    validate(spec.ic);
}

std::uint64_t replica_seed(std::uint64_t sweep_seed, int replica) {
    SeededStream s(sweep_seed ^ (0xd1b54a32d192ed03ULL * static_cast<std::uint64_t>(replica + 1)));
    return s.next();
}

RunRecord run_cell(const SweepSpec& spec, double chi, double mu, double p, int replica) {
    RunRecord rec;
    rec.chi = chi;
    rec.mu = mu;
    rec.p = p;
    rec.replica = replica;
    rec.params = spec.base_params;
    rec.params.chi = chi;
    rec.params.mu = mu;
    rec.params.p = p;

    const auto start = std::chrono::steady_clock::now();
    try {
        const int n = spec.domain.dim();
        const TheoryConstants theory = theory_constants(n, chi, spec.c_reg, spec.gamma0);
        rec.theta0_est = theory.theta0;
        rec.prediction = classify_theory(p, spec.q, n, chi, mu, theory.theta0);

        rec.params = checked(rec.params);
        auto [u0, v0] = make_initial(spec.ic, spec.domain, rec.params, replica_seed(spec.seed, replica));
        const RunResult result = run(spec.domain, u0, v0, rec.params, spec.base_cfg);
        rec.final_status = result.final.status;
        rec.t_final = result.final.t;
        rec.steps = result.final.steps;
        for (const Sample& s : result.series) rec.sup_u_max = std::max(rec.sup_u_max, s.sup_u);
        rec.outcome = classify_run(result.final, result.series, spec.rules);
        if (result.error) {
            rec.outcome = Outcome::Undecided;
            rec.note = *result.error;
        }
    } catch (const std::exception& e) {
        rec.outcome = Outcome::Undecided;
        rec.note = e.what();
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, int workers) {
    validate(spec);
    if (workers < 1) throw DomainError("workers must be positive");

    struct Task {
        double chi, mu, p;
        int replica;
    };
    // Enumerated in lexicographic order; each task writes only its own slot.
    std::vector<Task> tasks;
    for (double chi : spec.chi_values)
        for (double mu : spec.mu_values)
            for (double p : spec.p_values)
                for (int r = 0; r < spec.repeat; ++r) tasks.push_back({chi, mu, p, r});

    std::vector<RunRecord> records(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            records[i] = run_cell(spec, t.chi, t.mu, t.p, t.replica);
        }
    };

    const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), tasks.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    return records;
}

Outcome worst_outcome(Outcome a, Outcome b) { return severity(a) >= severity(b) ? a : b; }

RegimeMap regime_map(const std::vector<RunRecord>& records) {
    using Key = std::tuple<double, double, double>;
    std::map<Key, RegimeRow> cells;
    for (const RunRecord& r : records) {
        const Key key{r.chi, r.mu, r.p};
        auto it = cells.find(key);
        if (it == cells.end()) {
            cells.emplace(key, RegimeRow{r.chi, r.mu, r.p, 1, r.outcome, r.prediction, false});
        } else {
            it->second.replicas += 1;
            it->second.outcome = worst_outcome(it->second.outcome, r.outcome);
        }
    }

    RegimeMap map;
    for (auto& [key, row] : cells) {
        row.agree = predicts_bounded(row.prediction) == (row.outcome == Outcome::Bounded);
        map.matches += row.agree ? 1 : 0;
        map.rows.push_back(row);
    }
    map.total = map.rows.size();
    map.agreement_fraction = map.total == 0 ? 0.0 : static_cast<double>(map.matches) / static_cast<double>(map.total);

    // Rows are sorted by (chi, mu, p); compare every pair with equal chi, p.
    for (std::size_t i = 0; i < map.rows.size(); ++i) {
        const RegimeRow& lo = map.rows[i];
        if (lo.outcome != Outcome::Bounded) continue;
        for (std::size_t j = i + 1; j < map.rows.size(); ++j) {
            const RegimeRow& hi = map.rows[j];
            if (hi.chi != lo.chi) break;
            if (hi.p == lo.p && hi.mu > lo.mu && hi.outcome != Outcome::Bounded)
                map.monotonicity_violations.push_back({lo.chi, lo.p, lo.mu, hi.mu});
        }
    }
    return map;
}

} // namespace kellerscope
