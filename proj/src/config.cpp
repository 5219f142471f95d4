#include "kellerscope/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace kellerscope {

namespace {

const std::map<std::string, std::set<std::string>, std::less<>>& schema() {
    static const std::map<std::string, std::set<std::string>, std::less<>> keys = {
        {"domain", {"dim", "lengths", "cells"}},
        {"model", {"tau", "chi", "mu", "a", "k", "p", "s0_phi", "phi_family", "reaction"}},
        {"stepper",
         {"dt_init", "dt_min", "dt_max", "safety", "blowup_threshold", "t_end", "observer_stride", "observer_gamma",
          "helmholtz_tol", "helmholtz_max_iter", "stall_steps"}},
        {"initial", {"kind", "background", "amplitude", "width", "relative", "noise", "signal", "seed"}},
        {"output", {"dir", "series", "snapshot", "records", "regime_map"}},
        {"sweep", {"chi", "mu", "p", "repeat", "seed", "workers"}},
        {"theory", {"q", "gamma0", "c_reg"}},
        {"classify", {"window_fraction", "max_drift", "spike_factor"}},
    };
    return keys;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

struct Entry {
    std::string value;
    int line;
};

// Collects raw key/value entries and reports problems with their lines.
class Reader {
public:
    std::map<std::string, std::map<std::string, Entry>> entries;
    std::map<std::string, int> section_lines;
    std::vector<ConfigIssue> issues;

    void issue(int line, const std::string& section, const std::string& key, const std::string& msg) {
        std::ostringstream out;
        out << "[" << section << "]";
        if (!key.empty()) out << " " << key;
        out << ": " << msg;
        issues.push_back({line, out.str()});
    }

    const Entry* find(const std::string& section, const std::string& key) const {
        auto s = entries.find(section);
        if (s == entries.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    int line_of(const std::string& section, const std::string& key) const {
        if (const Entry* e = find(section, key)) return e->line;
        auto s = section_lines.find(section);
        return s == section_lines.end() ? 0 : s->second;
    }

    bool has_section(const std::string& section) const { return section_lines.count(section) > 0; }

    std::optional<double> number(std::string_view text) const {
        text = trim(text);
        double value = 0.0;
        const auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(text.data(), end, value);
        if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
        return value;
    }

    // Reads a finite number into `target`; `ok` states the constraint.
    template <class Check>
    void real(const std::string& section, const std::string& key, double& target, Check ok, const char* rule) {
        const Entry* e = find(section, key);
        if (!e) return;
        const auto value = number(e->value);
        if (!value) {
            issue(e->line, section, key, "expected a finite number, got '" + e->value + "'");
            return;
        }
        if (!ok(*value)) {
            issue(e->line, section, key, std::string(rule) + " (got " + e->value + ")");
            return;
        }
        target = *value;
    }

    template <class Int, class Check>
    void integer(const std::string& section, const std::string& key, Int& target, Check ok, const char* rule) {
        const Entry* e = find(section, key);
        if (!e) return;
        const std::string_view text = trim(e->value);
        Int value{};
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            issue(e->line, section, key, "expected an integer, got '" + e->value + "'");
            return;
        }
        if (!ok(value)) {
            issue(e->line, section, key, std::string(rule) + " (got " + e->value + ")");
            return;
        }
        target = value;
    }

    void boolean(const std::string& section, const std::string& key, bool& target) {
        const Entry* e = find(section, key);
        if (!e) return;
        const std::string_view text = trim(e->value);
        if (text == "true") {
            target = true;
        } else if (text == "false") {
            target = false;
        } else {
            issue(e->line, section, key, "expected true or false, got '" + e->value + "'");
        }
    }

    void text(const std::string& section, const std::string& key, std::string& target) {
        const Entry* e = find(section, key);
        if (!e) return;
        if (e->value.empty()) {
            issue(e->line, section, key, "must not be empty");
            return;
        }
        target = e->value;
    }

    template <class Parse, class Target>
    void choice(const std::string& section, const std::string& key, Target& target, Parse parse) {
        const Entry* e = find(section, key);
        if (!e) return;
        try {
            target = parse(std::string_view(e->value));
        } catch (const DomainError& err) {
            issue(e->line, section, key, err.what());
        }
    }

    std::optional<std::vector<double>> list(const std::string& section, const std::string& key) {
        const Entry* e = find(section, key);
        if (!e) return std::nullopt;
        std::vector<double> values;
        std::string_view rest = e->value;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = rest.substr(0, comma);
            const auto value = number(item);
            if (!value) {
                issue(e->line, section, key, "expected a comma separated list of numbers, got '" + e->value + "'");
                return std::nullopt;
            }
            values.push_back(*value);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return values;
    }
};

void tokenize(std::string_view text, Reader& r) {
    std::string section;
    int line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                r.issues.push_back({line_no, "malformed section header '" + std::string(line) + "'"});
                section.clear();
                continue;
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().count(section)) {
                r.issues.push_back({line_no, "unknown section [" + section + "]"});
                section.clear();
                continue;
            }
            r.section_lines.emplace(section, line_no);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            r.issues.push_back({line_no, "expected 'key = value', got '" + std::string(line) + "'"});
            continue;
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) {
            r.issues.push_back({line_no, "key '" + key + "' is not inside a known [section]"});
            continue;
        }
        if (!schema().find(section)->second.count(key)) {
            r.issue(line_no, section, key, "unknown key");
            continue;
        }
        auto& keys = r.entries[section];
        if (auto it = keys.find(key); it != keys.end()) {
            r.issue(line_no, section, key, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
            continue;
        }
        keys.emplace(key, Entry{value, line_no});
    }
}

const auto positive = [](double x) { return x > 0.0; };
const auto nonnegative = [](double x) { return x >= 0.0; };
const auto any = [](double) { return true; };

void read_domain(Reader& r, RunConfig& cfg) {
    int dim = 1;
    r.integer("domain", "dim", dim, [](int d) { return d == 1 || d == 2; }, "must be 1 or 2");
    std::array<double, 2> lengths{1.0, 1.0};
    std::array<std::size_t, 2> cells{64, 64};
    bool ok = true;

    if (auto values = r.list("domain", "lengths")) {
        const int line = r.line_of("domain", "lengths");
        if (values->size() != 1 && values->size() != static_cast<std::size_t>(dim)) {
            r.issue(line, "domain", "lengths", "expected 1 or " + std::to_string(dim) + " values");
            ok = false;
        } else {
            for (std::size_t i = 0; i < 2; ++i) lengths[i] = (*values)[std::min(i, values->size() - 1)];
            for (double x : *values)
                if (!(x > 0.0)) {
                    r.issue(line, "domain", "lengths", "must be positive");
                    ok = false;
                    break;
                }
        }
    } else if (r.find("domain", "lengths")) {
        ok = false;
    }

    if (auto values = r.list("domain", "cells")) {
        const int line = r.line_of("domain", "cells");
        if (values->size() != 1 && values->size() != static_cast<std::size_t>(dim)) {
            r.issue(line, "domain", "cells", "expected 1 or " + std::to_string(dim) + " values");
            ok = false;
        } else {
            for (std::size_t i = 0; i < 2; ++i) {
                const double x = (*values)[std::min(i, values->size() - 1)];
                if (x != std::floor(x) || x < 3.0) {
                    r.issue(line, "domain", "cells", "every cell count must be an integer >= 3");
                    ok = false;
                    break;
                }
                cells[i] = static_cast<std::size_t>(x);
            }
        }
    } else if (r.find("domain", "cells")) {
        ok = false;
    }

    if (!ok) return;
    try {
        cfg.domain = Domain::make(dim, lengths, cells);
    } catch (const DomainError& e) {
        r.issue(r.line_of("domain", "cells"), "domain", "", e.what());
    }
}

void read_model(Reader& r, RunConfig& cfg) {
    ModelParams& m = cfg.model;
    r.real("model", "tau", m.tau, positive, "must be positive");
    r.real("model", "chi", m.chi, nonnegative, "must be nonnegative");
    r.real("model", "mu", m.mu, positive, "must be positive");
    r.real("model", "a", m.a, nonnegative, "must be nonnegative");
    r.real("model", "k", m.k, positive, "must be positive");
    r.real("model", "p", m.p, any, "");
    r.real("model", "s0_phi", m.s0_phi, [](double x) { return x > 1.0; }, "must exceed 1");
    r.choice("model", "phi_family", m.phi_family, phi_family_from_string);
    r.boolean("model", "reaction", m.reaction);
    if (m.phi_family == PhiFamily::Linear && r.find("model", "p") && m.p != 0.0)
        r.issue(r.line_of("model", "p"), "model", "p", "the linear family fixes p = 0");
    try {
        m = checked(m);
    } catch (const DomainError& e) {
        r.issue(r.line_of("model", "p"), "model", "", e.what());
    }
}

void read_stepper(Reader& r, RunConfig& cfg) {
    StepperConfig& s = cfg.stepper;
    r.real("stepper", "dt_init", s.dt_init, positive, "must be positive");
    r.real("stepper", "dt_min", s.dt_min, positive, "must be positive");
    r.real("stepper", "dt_max", s.dt_max, positive, "must be positive");
    r.real("stepper", "safety", s.safety, [](double x) { return x > 0.0 && x <= 1.0; }, "must lie in (0, 1]");
    if (r.find("stepper", "blowup_threshold")) {
        double threshold = 0.0;
        const auto before = r.issues.size();
        r.real("stepper", "blowup_threshold", threshold, [](double x) { return x > 1.0; }, "must exceed 1");
        if (r.issues.size() == before) s.blowup_threshold = threshold;
    }
    r.real("stepper", "t_end", s.t_end, positive, "must be positive");
    r.integer("stepper", "observer_stride", s.observer_stride, [](int x) { return x >= 1; }, "must be >= 1");
    r.real("stepper", "observer_gamma", s.observer_gamma, [](double x) { return x >= 1.0; }, "must be >= 1");
    r.real("stepper", "helmholtz_tol", s.helmholtz_tol, positive, "must be positive");
    r.integer("stepper", "helmholtz_max_iter", s.helmholtz_max_iter, [](int x) { return x >= 1; }, "must be >= 1");
    r.integer("stepper", "stall_steps", s.stall_steps, [](int x) { return x >= 1; }, "must be >= 1");

    if (!(s.dt_min <= s.dt_init && s.dt_init <= s.dt_max)) {
        const char* key = r.find("stepper", "dt_init") ? "dt_init" : (r.find("stepper", "dt_max") ? "dt_max" : "dt_min");
        r.issue(r.line_of("stepper", key), "stepper", key, "need dt_min <= dt_init <= dt_max");
    }
}

void read_initial(Reader& r, RunConfig& cfg) {
    InitialCondition& ic = cfg.initial;
    r.choice("initial", "kind", ic.kind, ic_kind_from_string);
    r.real("initial", "background", ic.background, nonnegative, "must be nonnegative");
    r.real("initial", "amplitude", ic.amplitude, nonnegative, "must be nonnegative");
    r.real("initial", "width", ic.width, positive, "must be positive");
    r.boolean("initial", "relative", ic.relative);
    r.real("initial", "noise", ic.noise, [](double x) { return x >= 0.0 && x <= 1.0; }, "must lie in [0, 1]");
    r.choice("initial", "signal", ic.signal, signal_init_from_string);
    r.integer("initial", "seed", cfg.seed, [](std::uint64_t) { return true; }, "");
}

void read_output(Reader& r, RunConfig& cfg) {
    r.text("output", "dir", cfg.output.dir);
    r.text("output", "series", cfg.output.series);
    r.text("output", "snapshot", cfg.output.snapshot);
    r.text("output", "records", cfg.output.records);
    r.text("output", "regime_map", cfg.output.regime_map);
}

void read_sweep(Reader& r, RunConfig& cfg) {
    if (!r.has_section("sweep")) return;
    SweepSettings s;
    s.chi = {cfg.model.chi};
    s.mu = {cfg.model.mu};
    s.p = {cfg.model.p};
    auto ascending = [&](const char* key, std::vector<double>& target, bool must_be_positive) {
        auto values = r.list("sweep", key);
        if (!values) return;
        for (std::size_t i = 0; i < values->size(); ++i) {
            if (must_be_positive && !((*values)[i] > 0.0)) {
                r.issue(r.line_of("sweep", key), "sweep", key, "values must be positive");
                return;
            }
            if (i > 0 && !((*values)[i] > (*values)[i - 1])) {
                r.issue(r.line_of("sweep", key), "sweep", key, "values must be strictly ascending");
                return;
            }
        }
        target = *values;
    };
    ascending("chi", s.chi, true);
    ascending("mu", s.mu, true);
    ascending("p", s.p, false);
    r.integer("sweep", "repeat", s.repeat, [](int x) { return x >= 1; }, "must be >= 1");
    r.integer("sweep", "seed", s.seed, [](std::uint64_t) { return true; }, "");
    r.integer("sweep", "workers", s.workers, [](int x) { return x >= 0; }, "must be >= 0");
    cfg.sweep = s;
}

void read_theory(Reader& r, RunConfig& cfg) {
    r.real("theory", "q", cfg.theory.q, any, "");
    if (r.find("theory", "gamma0")) {
        double g = 0.0;
        const auto before = r.issues.size();
        r.real("theory", "gamma0", g, [](double x) { return x > 1.0; }, "must exceed 1");
        if (r.issues.size() == before) cfg.theory.gamma0 = g;
    }
    r.real("theory", "c_reg", cfg.theory.c_reg, positive, "must be positive");
}

void read_classify(Reader& r, RunConfig& cfg) {
    r.real("classify", "window_fraction", cfg.classify.window_fraction, [](double x) { return x > 0.0 && x <= 1.0; },
           "must lie in (0, 1]");
    r.real("classify", "max_drift", cfg.classify.max_drift, positive, "must be positive");
    r.real("classify", "spike_factor", cfg.classify.spike_factor, [](double x) { return x >= 1.0; }, "must be >= 1");
}

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string num_list(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += num(xs[i]);
    }
    return out;
}

} // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    return domain == o.domain && model == o.model && stepper == o.stepper && initial == o.initial &&
           seed == o.seed && output == o.output && sweep == o.sweep && theory == o.theory &&
           classify.window_fraction == o.classify.window_fraction && classify.max_drift == o.classify.max_drift &&
           classify.spike_factor == o.classify.spike_factor;
}

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) out << '\n';
        if (issues[i].line > 0) out << "line " << issues[i].line << ": ";
        out << issues[i].message;
    }
    return out.str();
}

} // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues) : Error(join_issues(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(std::string_view text) {
    Reader r;
    tokenize(text, r);
    RunConfig cfg;
    read_domain(r, cfg);
    read_model(r, cfg);
    read_stepper(r, cfg);
    read_initial(r, cfg);
    read_output(r, cfg);
    read_sweep(r, cfg);
    read_theory(r, cfg);
    read_classify(r, cfg);
    if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const Domain& d = cfg.domain;
    out << "[domain]\n";
    out << "dim = " << d.dim() << "\n";
    if (d.dim() == 2) {
        out << "lengths = " << num(d.length(0)) << ", " << num(d.length(1)) << "\n";
        out << "cells = " << d.nx() << ", " << d.ny() << "\n";
    } else {
        out << "lengths = " << num(d.length(0)) << "\n";
        out << "cells = " << d.nx() << "\n";
    }

    const ModelParams& m = cfg.model;
    out << "\n[model]\n";
    out << "tau = " << num(m.tau) << "\nchi = " << num(m.chi) << "\nmu = " << num(m.mu) << "\na = " << num(m.a)
        << "\nk = " << num(m.k) << "\np = " << num(m.p) << "\ns0_phi = " << num(m.s0_phi)
        << "\nphi_family = " << to_string(m.phi_family) << "\nreaction = " << (m.reaction ? "true" : "false") << "\n";

    const StepperConfig& s = cfg.stepper;
    out << "\n[stepper]\n";
    out << "dt_init = " << num(s.dt_init) << "\ndt_min = " << num(s.dt_min) << "\ndt_max = " << num(s.dt_max)
        << "\nsafety = " << num(s.safety) << "\n";
    if (s.blowup_threshold) out << "blowup_threshold = " << num(*s.blowup_threshold) << "\n";
    out << "t_end = " << num(s.t_end) << "\nobserver_stride = " << s.observer_stride
        << "\nobserver_gamma = " << num(s.observer_gamma) << "\nhelmholtz_tol = " << num(s.helmholtz_tol)
        << "\nhelmholtz_max_iter = " << s.helmholtz_max_iter << "\nstall_steps = " << s.stall_steps << "\n";

    const InitialCondition& ic = cfg.initial;
    out << "\n[initial]\n";
    out << "kind = " << to_string(ic.kind) << "\nbackground = " << num(ic.background)
        << "\namplitude = " << num(ic.amplitude) << "\nwidth = " << num(ic.width)
        << "\nrelative = " << (ic.relative ? "true" : "false") << "\nnoise = " << num(ic.noise)
        << "\nsignal = " << to_string(ic.signal) << "\nseed = " << cfg.seed << "\n";

    out << "\n[output]\n";
    out << "dir = " << cfg.output.dir << "\nseries = " << cfg.output.series << "\nsnapshot = " << cfg.output.snapshot
        << "\nrecords = " << cfg.output.records << "\nregime_map = " << cfg.output.regime_map << "\n";

    if (cfg.sweep) {
        const SweepSettings& w = *cfg.sweep;
        out << "\n[sweep]\n";
        out << "chi = " << num_list(w.chi) << "\nmu = " << num_list(w.mu) << "\np = " << num_list(w.p)
            << "\nrepeat = " << w.repeat << "\nseed = " << w.seed << "\nworkers = " << w.workers << "\n";
    }

    out << "\n[theory]\n";
    out << "q = " << num(cfg.theory.q) << "\n";
    if (cfg.theory.gamma0) out << "gamma0 = " << num(*cfg.theory.gamma0) << "\n";
    out << "c_reg = " << num(cfg.theory.c_reg) << "\n";

    out << "\n[classify]\n";
    out << "window_fraction = " << num(cfg.classify.window_fraction) << "\nmax_drift = " << num(cfg.classify.max_drift)
        << "\nspike_factor = " << num(cfg.classify.spike_factor) << "\n";
    return out.str();
}

SweepSpec make_sweep_spec(const RunConfig& cfg) {
    SweepSpec spec;
    const SweepSettings settings = cfg.sweep.value_or(SweepSettings{{cfg.model.chi}, {cfg.model.mu}, {cfg.model.p}});
    spec.chi_values = settings.chi;
    spec.mu_values = settings.mu;
    spec.p_values = settings.p;
    spec.repeat = settings.repeat;
    spec.seed = settings.seed;
    spec.domain = cfg.domain;
    spec.base_params = cfg.model;
    spec.base_cfg = cfg.stepper;
    spec.ic = cfg.initial;
    spec.q = cfg.theory.q;
    spec.gamma0 = cfg.theory.gamma0;
    spec.c_reg = cfg.theory.c_reg;
    spec.rules = cfg.classify;
    return spec;
}

} // namespace kellerscope
