#ifndef NULLWAVE_CONFIG_PARSE_HPP
#define NULLWAVE_CONFIG_PARSE_HPP

#include <iosfwd>
#include <string>

#include "nullwave/run_config.hpp"

// INI-style run configuration.  Sections: [grid] [time] [weights] [data]
// [nonlinearity] [monitors] [output] [study].  See the README for the full
// key reference.  Parse errors and validation failures are aggregated and
// thrown as one ConfigError listing every problem with its line number.

namespace nullwave {

struct OutputConfig {
    std::string directory;        // --out overrides
    bool snapshots = false;       // write phi/p/q slices at each cadence tick
    std::string snapshot_format = "csv";  // "csv" | "binary"
};

struct StudyConfig {
    std::vector<int> grid_sizes;        // converge
    std::vector<double> eps_values;     // increment-scaling / lifespan
    std::vector<double> t_caps;         // lifespan
};

struct ParsedConfig {
    RunConfig run;
    OutputConfig output;
    StudyConfig study;
};

ParsedConfig parse_config_text(const std::string& text, const std::string& source_name);
ParsedConfig parse_config_file(const std::string& path);

} // namespace nullwave

#endif
