#include "noqe/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace noqe {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(text, &pos);
        if (pos != text.size()) throw Error("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw Error("cannot parse " + what + " from '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

}  // namespace

std::string format_sig(double x, int digits) {
    if (std::isnan(x)) return "nan";
    if (x == 0.0) x = 0.0;  // normalize the sign of zero
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    bool row_open = false;
};

CsvWriter::CsvWriter(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);  // byte-identical across platforms
    if (!impl_->out) {
        delete impl_;
        throw Error("cannot open '" + path + "' for writing");
    }
}

CsvWriter::~CsvWriter() {
    if (impl_->row_open) impl_->out << "\n";
    delete impl_;
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) impl_->out << ",";
        impl_->out << cols[i];
    }
    impl_->out << "\n";
}

void CsvWriter::field(const std::string& s) {
    if (impl_->row_open) impl_->out << ",";
    impl_->out << s;
    impl_->row_open = true;
}

void CsvWriter::field(double x) { field(format_sig(x)); }
void CsvWriter::field(int x) { field(std::to_string(x)); }
void CsvWriter::field(std::int64_t x) { field(std::to_string(x)); }

void CsvWriter::end_row() {
    impl_->out << "\n";
    impl_->row_open = false;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(lineno) + " is not 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw Error("config line " + std::to_string(lineno) + " has an empty key");
        out[key] = val;
    }
    return out;
}

AmplitudeScaling parse_scale(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("scale must look like 'uniform:1.3'");
    std::string kind = trim(text.substr(0, colon));
    std::vector<std::string> args = split(text.substr(colon + 1), ',');

    if (kind == "uniform") {
        if (args.size() != 1) throw Error("uniform scaling takes one factor");
        return AmplitudeScaling::uniform(parse_double(trim(args[0]), "scale factor"));
    }
    if (kind == "scs") {
        if (args.size() != 2) throw Error("scs scaling takes same-spin,opposite-spin factors");
        return {parse_double(trim(args[0]), "same-spin factor"),
                parse_double(trim(args[1]), "opposite-spin factor")};
    }
    if (kind == "sos") {
        if (args.size() != 1) throw Error("sos scaling takes one opposite-spin factor");
        return {0.0, parse_double(trim(args[0]), "opposite-spin factor")};
    }
    throw Error("unknown scaling kind '" + kind + "'");
}

ModeSpec parse_mode(const std::string& text) {
    ModeSpec spec;
    if (trim(text) == "exact") return spec;

    auto colon = text.find(':');
    std::string kind = trim(colon == std::string::npos ? text : text.substr(0, colon));
    if (kind != "lowrank") throw Error("mode must be 'exact' or 'lowrank:...'");
    spec.lowrank = true;

    bool order_given = false;
    if (colon != std::string::npos) {
        for (const std::string& item : split(text.substr(colon + 1), ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw Error("lowrank options are key=value pairs");
            std::string key = trim(item.substr(0, eq));
            std::string val = trim(item.substr(eq + 1));
            if (key == "k") {
                spec.opts.trotter_steps = static_cast<int>(parse_double(val, "trotter steps"));
            } else if (key == "eps") {
                spec.opts.trunc_eps = parse_double(val, "truncation epsilon");
            } else if (key == "order") {
                spec.opts.suzuki_order = static_cast<int>(parse_double(val, "suzuki order"));
                order_given = true;
            } else {
                throw Error("unknown lowrank option '" + key + "'");
            }
        }
    }
    // an explicit step count implies a product formula; without one the mode
    // is truncation only (exact factors)
    if (!order_given && spec.opts.trotter_steps > 1) spec.opts.suzuki_order = 2;
    if (spec.opts.trotter_steps < 1) throw Error("lowrank needs k >= 1");
    if (spec.opts.trunc_eps < 0.0) throw Error("lowrank needs eps >= 0");
    return spec;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts = split(text, ':');
    if (parts.size() == 1) return {parse_double(trim(parts[0]), "grid point")};
    if (parts.size() != 3) throw Error("grid must be a single value or start:stop:step");

    double start = parse_double(trim(parts[0]), "grid start");
    double stop = parse_double(trim(parts[1]), "grid stop");
    double step = parse_double(trim(parts[2]), "grid step");
    if (step <= 0.0) throw Error("grid step must be positive");
    if (stop < start) throw Error("grid stop must not precede start");

    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double r = start + i * step;
        if (r > stop + 1e-9 * step) break;
        grid.push_back(r);
    }
    return grid;
}

}  // namespace noqe
