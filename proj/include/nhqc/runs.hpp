#pragma once
// Command implementations shared by the CLI and the tests: each run_*
// builds its output tables purely from a RunConfig, so byte-determinism can
// be tested without spawning processes. Figure presets return one or more
// (path suffix, table) pairs.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nhqc/config.hpp"
#include "nhqc/table.hpp"

namespace nhqc {

Table run_spectrum(const RunConfig& cfg);  // single-point eigenmode report
Table run_scan2d(const RunConfig& cfg);
Table run_epfind(const RunConfig& cfg);    // 1-D when n2 <= 1, else 2-D
Table run_evolve(const RunConfig& cfg);
Table run_nonrecip(const RunConfig& cfg);
Table run_asym(const RunConfig& cfg);
Table run_oracle(const RunConfig& cfg);

// name in {fig2, fig3, fig4a, fig4b, fig5, fig6, fig7}; each pair is
// (output path, table) with paths derived from cfg.output_path.
std::vector<std::pair<std::string, Table>> run_figure(const std::string& name,
                                                      const RunConfig& cfg);

// Fast invariant sweep; prints one line per check to log. Returns 0 when
// clean, 4 on any violation.
int run_selftest(const RunConfig& cfg, std::ostream& log);

}  // namespace nhqc
