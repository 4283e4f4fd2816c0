#pragma once

#include "noqe/correlation.hpp"
#include "noqe/noqe.hpp"
#include "noqe/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace noqe {

// 12 significant digits for result files, 17 for round-trip dumps.
std::string format_sig(double x, int digits = 12);

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& cols);
    void field(const std::string& s);
    void field(double x);
    void field(int x);
    void field(std::int64_t x);
    void end_row();

  private:
    struct Impl;
    Impl* impl_;
};

// key = value lines; '#' starts a comment; keys identical to the CLI flags.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// "uniform:1.3" | "scs:0.33,1.2" | "sos:1.3"
AmplitudeScaling parse_scale(const std::string& text);

// "exact" | "lowrank:k=2,eps=0.024[,order=2]"
struct ModeSpec {
    bool lowrank = false;
    LowRankOptions opts;
};
ModeSpec parse_mode(const std::string& text);

// "start:stop:step", inclusive endpoints, evaluated by integer index so the
// same text always produces the same grid.
std::vector<double> parse_grid(const std::string& text);

}  // namespace noqe
