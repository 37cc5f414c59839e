#pragma once

#include "ffcm/bigint.hpp"
#include "ffcm/parallel.hpp"

#include <json.hpp>

#include <string>

namespace ffcm {

using Json = nlohmann::ordered_json;

// Emission policy: integers that fit in 64 bits appear as exact JSON
// numbers, larger ones as decimal strings; rationals are "a/b" strings;
// reals are 12-significant-digit strings.  No floats ever carry counts.
Json json_int(const BigInt& v);
std::string json_rat(const BigRat& v);
std::string json_real(double v);

// Runs one experiment described by a validated JSON config.  Subcommands:
// count, fourier, arcs, singdim, modulidim, gate, witness, grid.  Reports
// are deterministic for a fixed config: timing appears only when
// ctx.verbose is set.
Json run_experiment(const Json& config, const std::string& subcommand, const RunCtx& ctx);

// json: pretty-printed; csv: the report's "rows" table (or a single row of
// top-level scalars) with a header line.
std::string emit_report(const Json& report, const std::string& format);

} // namespace ffcm
