#include <revs/compiler.hpp>

#include <algorithm>
#include <chrono>

namespace revs
{

Compilation compile( FlatProgram program, CompileOptions const& options )
{
  auto start = std::chrono::steady_clock::now();
  Compilation c;
  c.program = std::move( program );
  c.mdd = build_mdd( c.program );
  c.plan = make_plan( c.mdd, options.strategy, options.qubit_budget );
  c.circuit = emit( c.mdd, c.plan );
  c.stats = stats( c.circuit );
  c.seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
  return c;
}

Compilation compile_text( std::string const& text, ParamMap const& params, CompileOptions const& options )
{
  return compile( compile_source( text, params ), options );
}

nlohmann::json disposition_counts( Plan const& plan )
{
  nlohmann::json j = nlohmann::json::object();
  for ( auto d : { Disposition::kept, Disposition::cleaned_eagerly, Disposition::checkpointed, Disposition::bennett_cleaned,
                   Disposition::unclean } )
    j[to_string( d )] = std::count( plan.disposition.begin(), plan.disposition.end(), d );
  return j;
}

nlohmann::json report_json( Compilation const& c, bool timing )
{
  nlohmann::json j;
  j["strategy"] = to_string( c.plan.strategy );
  if ( c.plan.strategy == Strategy::incremental )
    j["qubit_budget"] = c.plan.qubit_budget;
  j["qubits"] = c.stats.qubit_count;
  j["inputs"] = c.circuit.num_inputs;
  j["outputs"] = c.circuit.outputs.size();
  j["toffoli"] = c.stats.toffoli_count;
  j["cnot"] = c.stats.cnot_count;
  j["not"] = c.stats.not_count;
  j["gates"] = c.circuit.gates.size();
  j["mdd_nodes"] = c.mdd.size();
  j["unclean_paths"] = c.plan.unclean;
  j["checkpoints"] = c.plan.checkpoints;
  j["copy_and_reverse"] = c.plan.copy_and_reverse;
  j["dispositions"] = disposition_counts( c.plan );
  if ( timing )
    j["seconds"] = c.seconds;
  return j;
}

} // namespace revs
