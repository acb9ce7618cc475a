#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "psl/phase_grid.hpp"
#include "psl/signal.hpp"

namespace psl {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);
double parse_double(const std::string& text);

/// CSV with header `index,t,re,im`; dt is recovered from t_0 = -(n/2) dt.
void write_signal_csv(std::ostream& out, const Signal& f);
Signal read_signal_csv(std::istream& in);
/// Little-endian u64 n, f64 dt, then n (re, im) pairs of f64.
void write_signal_binary(std::ostream& out, const Signal& f);
Signal read_signal_binary(std::istream& in);

void save_signal(const Signal& f, const std::string& path);  // by extension: .csv or binary
Signal load_signal(const std::string& path);

nlohmann::ordered_json phase_grid_to_json(const PhaseGrid& g);
PhaseGrid phase_grid_from_json(const nlohmann::json& j);

/// CSV with header `ix,ixi,x,xi,re,im`, indices local to the stored window.
void write_field_csv(std::ostream& out, const PhaseSpaceField& w);
/// Little-endian u64 rows, u64 bins, then rows * bins (re, im) pairs; kind,
/// tau and axes go to a JSON sidecar at `path + ".json"`.
void write_field_binary(const PhaseSpaceField& w, const std::string& path);
PhaseSpaceField read_field_binary(const std::string& path);

}  // namespace psl
