#include "kellerscope/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kellerscope {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// Notes are free text; keep them on one CSV field.
std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

} // namespace

std::string format_series_csv(const std::vector<Sample>& series) {
    std::ostringstream out;
    out << "t,dt,mass,sup_u,sup_v,l2_u,lgamma_u,status\n";
    for (const Sample& s : series) {
        out << format_number(s.t) << ',' << format_number(s.dt) << ',' << format_number(s.mass) << ','
            << format_number(s.sup_u) << ',' << format_number(s.sup_v) << ',' << format_number(s.l2_u) << ','
            << format_number(s.lgamma_u) << ',' << to_string(s.status) << '\n';
    }
    return out.str();
}

std::string format_records_csv(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << "chi,mu,p,replica,outcome,prediction,final_status,sup_u_max,t_final,steps,theta0_est,note\n";
    for (const RunRecord& r : records) {
        out << format_number(r.chi) << ',' << format_number(r.mu) << ',' << format_number(r.p) << ',' << r.replica
            << ',' << to_string(r.outcome) << ',' << to_string(r.prediction) << ',' << to_string(r.final_status) << ','
            << format_number(r.sup_u_max) << ',' << format_number(r.t_final) << ',' << r.steps << ','
            << format_number(r.theta0_est) << ',' << quote(r.note) << '\n';
    }
    return out.str();
}

std::string format_regime_csv(const RegimeMap& map) {
    std::ostringstream out;
    out << "chi,mu,p,replicas,outcome,prediction,agree\n";
    for (const RegimeRow& r : map.rows) {
        out << format_number(r.chi) << ',' << format_number(r.mu) << ',' << format_number(r.p) << ',' << r.replicas
            << ',' << to_string(r.outcome) << ',' << to_string(r.prediction) << ',' << (r.agree ? "true" : "false")
            << '\n';
    }
    return out.str();
}

std::string format_timings_csv(const std::vector<RunRecord>& records) {
    std::ostringstream out;
    out << "chi,mu,p,replica,wall_time\n";
    for (const RunRecord& r : records) {
        out << format_number(r.chi) << ',' << format_number(r.mu) << ',' << format_number(r.p) << ',' << r.replica
            << ',' << format_number(r.wall_time) << '\n';
    }
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace kellerscope
