#include "finform/trace_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "finform/errors.hpp"

namespace finform {

namespace {

void append_num(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    line += buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace) {
    os << "# finform-trace v1\n";
    std::string header = "t";
    for (int i = 0; i < trace.state_dim; ++i) header += ",x" + std::to_string(i);
    header += ",psi,psi_dot_true,u,alpha,theta0";
    if (trace.theta_cols == 1) {
        header += ",theta_hat";
    } else {
        for (int i = 0; i < trace.theta_cols; ++i) header += ",theta_hat" + std::to_string(i);
    }
    header += ",S_delta,theta_I,C_theta,event_flag";
    os << header << "\n";

    std::size_t next_event = 0;
    std::string line;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        while (next_event < trace.events.size() && trace.events[next_event].t <= trace.t[i]) {
            const SwitchEvent& ev = trace.events[next_event];
            line.clear();
            line += "# event ";
            line += to_string(ev.kind);
            line += " t=";
            append_num(line, ev.t);
            line += " theta0_before=";
            append_num(line, ev.theta0_before);
            line += " theta0_after=";
            append_num(line, ev.theta0_after);
            os << line << "\n";
            ++next_event;
        }
        line.clear();
        append_num(line, trace.t[i]);
        for (int c = 0; c < trace.state_dim; ++c) {
            line += ',';
            append_num(line, trace.x[i][static_cast<std::size_t>(c)]);
        }
        line += ',';
        append_num(line, trace.psi[i]);
        line += ',';
        append_num(line, trace.psi_dot_true[i]);
        line += ',';
        append_num(line, trace.u[i]);
        line += ',';
        append_num(line, trace.alpha[i]);
        line += ',';
        append_num(line, trace.theta0[i]);
        for (int c = 0; c < trace.theta_cols; ++c) {
            line += ',';
            append_num(line, trace.theta_hat[i][static_cast<std::size_t>(c)]);
        }
        line += ',';
        line += std::to_string(trace.s_delta[i]);
        line += ',';
        append_num(line, trace.theta_I[i]);
        line += ',';
        append_num(line, trace.c_theta[i]);
        line += ',';
        line += std::to_string(trace.event_flag[i]);
        os << line << "\n";
    }
    for (; next_event < trace.events.size(); ++next_event) {
        const SwitchEvent& ev = trace.events[next_event];
        os << "# event " << to_string(ev.kind) << " t=" << ev.t << "\n";
    }
}

void write_trace_csv_file(const std::string& path, const Trace& trace) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_trace_csv(os, trace);
}

Trace read_trace_csv(std::istream& is) {
    Trace tr;
    std::string line;
    int lineno = 0;

    if (!std::getline(is, line)) throw ConfigError(1, "empty trace file");
    ++lineno;
    if (line.rfind("# finform-trace v1", 0) != 0)
        throw ConfigError(lineno, "missing finform-trace header");

    if (!std::getline(is, line)) throw ConfigError(2, "missing column header");
    ++lineno;
    std::vector<std::string> cols;
    {
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    int n = 0, d = 0;
    for (const std::string& c : cols) {
        if (c.rfind("x", 0) == 0 && c.size() > 1 && std::isdigit(static_cast<unsigned char>(c[1])))
            ++n;
        if (c == "theta_hat")
            d = 1;
        else if (c.rfind("theta_hat", 0) == 0 && c.size() > 9)
            ++d;
    }
    if (n == 0 || d == 0) throw ConfigError(lineno, "unrecognized trace columns");
    tr.state_dim = n;
    tr.theta_cols = d;
    const std::size_t expected_cols = 1 + static_cast<std::size_t>(n) + 5 +
                                      static_cast<std::size_t>(d) + 4;
    if (cols.size() != expected_cols) throw ConfigError(lineno, "column count mismatch");

    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line);
            std::string hash, word, kind;
            ss >> hash >> word >> kind;
            if (word != "event") continue;
            SwitchEvent ev;
            ev.kind = (kind == "ENTER") ? EventKind::Enter : EventKind::Leave;
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const double val = std::strtod(tok.c_str() + eq + 1, nullptr);
                if (key == "t") ev.t = val;
                else if (key == "theta0_before") ev.theta0_before = val;
                else if (key == "theta0_after") ev.theta0_after = val;
            }
            tr.events.push_back(ev);
            continue;
        }
        std::vector<double> vals;
        vals.reserve(expected_cols);
        const char* p = line.c_str();
        char* end = nullptr;
        while (*p) {
            const double v = std::strtod(p, &end);
            if (end == p) throw ConfigError(lineno, "bad numeric field");
            vals.push_back(v);
            p = (*end == ',') ? end + 1 : end;
        }
        if (vals.size() != expected_cols) throw ConfigError(lineno, "row width mismatch");
        std::size_t c = 0;
        tr.t.push_back(vals[c++]);
        Vec x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = vals[c++];
        tr.x.push_back(std::move(x));
        tr.psi.push_back(vals[c++]);
        tr.psi_dot_true.push_back(vals[c++]);
        tr.u.push_back(vals[c++]);
        tr.alpha.push_back(vals[c++]);
        tr.theta0.push_back(vals[c++]);
        Vec th(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) th[static_cast<std::size_t>(i)] = vals[c++];
        tr.theta_hat.push_back(std::move(th));
        tr.s_delta.push_back(static_cast<int>(vals[c++]));
        tr.theta_I.push_back(vals[c++]);
        tr.c_theta.push_back(vals[c++]);
        tr.event_flag.push_back(static_cast<int>(vals[c++]));
    }
    return tr;
}

Trace read_trace_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open trace: " + path);
    return read_trace_csv(is);
}

}  // namespace finform
