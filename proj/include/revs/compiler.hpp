#pragma once

#include <revs/circuit.hpp>
#include <revs/emitter.hpp>
#include <revs/frontend.hpp>
#include <revs/mdd.hpp>
#include <revs/scheduler.hpp>

#include <json.hpp>

#include <string>

namespace revs
{

struct CompileOptions
{
  Strategy strategy = Strategy::eager;
  /// Total qubits for the incremental strategy.
  std::size_t qubit_budget = 0;
};

struct Compilation
{
  FlatProgram program;
  Mdd mdd;
  Plan plan;
  Circuit circuit;
  CircuitStats stats;
  double seconds = 0.0;
};

/// Flat program to circuit: MDD, cleanup plan, emission.
Compilation compile( FlatProgram program, CompileOptions const& options );

/// Parses and flattens `text` first.
Compilation compile_text( std::string const& text, ParamMap const& params, CompileOptions const& options );

/// Counts by disposition, keyed by its name.
nlohmann::json disposition_counts( Plan const& plan );

/// Stats report: strategy, gate counts, qubits, MDD size, cleanup summary, time.
/// `timing` adds wall-clock seconds, which makes the report run-dependent.
nlohmann::json report_json( Compilation const& c, bool timing = false );

} // namespace revs
