#include <revs/blif.hpp>
#include <revs/compiler.hpp>
#include <revs/pebble.hpp>
#include <revs/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace revs;
using nlohmann::json;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_user = 1;
constexpr int exit_verify = 2;

class user_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string slurp( std::string const& path )
{
  std::ifstream in( path );
  if ( !in || !std::filesystem::is_regular_file( path ) )
    throw user_error( "cannot open " + path );
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file( std::string const& path, std::string const& text )
{
  std::ofstream out( path );
  if ( !out )
    throw user_error( "cannot write " + path );
  out << text;
}

std::uint64_t default_seed()
{
  if ( auto const* s = std::getenv( "REVC_SEED" ) )
    return std::stoull( s );
  return 1;
}

ParamMap parse_params( std::vector<std::string> const& items )
{
  ParamMap m;
  for ( auto const& it : items )
  {
    auto eq = it.find( '=' );
    if ( eq == std::string::npos || eq == 0 )
      throw user_error( "--param expects name=value, got '" + it + "'" );
    try
    {
      m[it.substr( 0, eq )] = std::stoll( it.substr( eq + 1 ) );
    }
    catch ( std::exception const& )
    {
      throw user_error( "--param value for " + it.substr( 0, eq ) + " is not an integer" );
    }
  }
  return m;
}

bool is_blif( std::string const& path )
{
  return std::filesystem::path( path ).extension() == ".blif";
}

/// Settings shared by every subcommand that compiles a program.
struct Source
{
  std::string path;
  std::vector<std::string> params;
  std::string strategy = "eager";
  std::size_t qubits = 0;
  bool optimize_xor = false;

  void add_to( CLI::App* cmd )
  {
    cmd->add_option( "file", path, ".rev program or .blif netlist" )->required();
    cmd->add_option( "--param", params, "override a top-level integer binding, name=value" );
    cmd->add_option( "--strategy", strategy, "bennett, eager or incremental" )
        ->check( CLI::IsMember( { "bennett", "eager", "incremental" } ) );
    cmd->add_option( "--qubits", qubits, "qubit budget for the incremental strategy" );
    cmd->add_flag( "--optimize-xor", optimize_xor, "BLIF: group exclusive cubes before lowering" );
  }

  FlatProgram program() const
  {
    auto text = slurp( path );
    if ( is_blif( path ) )
    {
      auto n = parse_blif( text );
      return lower_to_flat( optimize_xor ? reorder_blif( n ) : n );
    }
    return compile_source( text, parse_params( params ) );
  }

  Compilation compile() const
  {
    CompileOptions o;
    o.strategy = parse_strategy( strategy );
    if ( o.strategy == Strategy::incremental && qubits == 0 )
      throw user_error( "--strategy incremental requires --qubits" );
    o.qubit_budget = qubits;
    return revs::compile( program(), o );
  }
};

json verify_json( VerifyReport const& r )
{
  json j;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["exhaustive"] = r.exhaustive;
  j["mismatches"] = r.mismatches;
  j["outputs_match"] = r.outputs_match;
  j["inputs_preserved"] = r.inputs_preserved;
  j["ancillas_zero"] = r.ancillas_zero;
  j["examples"] = json::array();
  for ( auto const& m : r.examples )
    j["examples"].push_back(
        { { "sample", m.sample }, { "input", m.input }, { "expected", m.expected }, { "actual", m.actual }, { "what", m.what } } );
  return j;
}

} // namespace

namespace
{

int cmd_compile( Source const& src, std::string const& out, std::string const& dot, std::string const& report, bool timing )
{
  auto c = src.compile();
  std::ostringstream circuit;
  write_circuit( circuit, c.circuit );
  if ( out.empty() )
    std::cout << circuit.str();
  else
    write_file( out, circuit.str() );
  if ( !dot.empty() )
  {
    std::ostringstream os;
    write_dot( os, c.mdd );
    write_file( dot, os.str() );
  }
  auto j = report_json( c, timing );
  j["file"] = src.path;
  if ( !report.empty() )
    write_file( report, j.dump( 2 ) + "\n" );
  else if ( !out.empty() )
    std::cout << j.dump( 2 ) << "\n";
  return exit_ok;
}

int cmd_stats( Source const& src, bool timing )
{
  auto c = src.compile();
  auto j = report_json( c, timing );
  j["file"] = src.path;
  std::cout << j.dump( 2 ) << "\n";
  return exit_ok;
}

int cmd_sim( Source const& src, std::string const& bits )
{
  Circuit c;
  if ( std::filesystem::path( src.path ).extension() == ".tfc" )
  {
    std::ifstream in( src.path );
    if ( !in )
      throw user_error( "cannot open " + src.path );
    c = read_circuit( in );
  }
  else
    c = src.compile().circuit;
  if ( bits.size() != c.num_inputs )
    throw user_error( "--input needs " + std::to_string( c.num_inputs ) + " bits, got " + std::to_string( bits.size() ) );
  BitVector in( c.width );
  auto given = BitVector::from_string( bits );
  for ( std::size_t i = 0; i < c.num_inputs; ++i )
    in.set( i, given.get( i ) );
  auto out = simulate( c, in );
  std::string result;
  for ( auto w : c.outputs )
    result += out.get( w ) ? '1' : '0';
  std::cout << result << "\n";
  return exit_ok;
}

int cmd_verify( Source const& src, std::size_t samples, std::uint64_t seed, std::string const& report )
{
  auto c = src.compile();
  VerifyReport r;
  if ( is_blif( src.path ) )
  {
    auto n = parse_blif( slurp( src.path ) );
    r = verify( c.circuit, [&]( BitVector const& u ) { return evaluate_blif( n, u ); }, samples, seed );
  }
  else
    r = verify( c.program, c.circuit, samples, seed );
  auto j = verify_json( r );
  j["file"] = src.path;
  j["compile"] = report_json( c );
  if ( !report.empty() )
    write_file( report, j.dump( 2 ) + "\n" );
  std::cout << src.path << ": " << to_string( c.plan.strategy ) << ", " << r.samples << ( r.exhaustive ? " inputs (all)" : " samples" )
            << ", seed " << r.seed << ", " << r.mismatches << " mismatches\n";
  for ( auto const& m : r.examples )
    std::cout << "  sample " << m.sample << ": " << m.what << " input=" << m.input << " expected=" << m.expected
              << " actual=" << m.actual << "\n";
  return r.ok() ? exit_ok : exit_verify;
}

int cmd_pebble( std::size_t T, std::size_t k, std::string const& strategy, bool show_moves )
{
  MoveList moves;
  if ( strategy == "bennett" )
    moves = bennett_strategy( T );
  else if ( strategy == "incremental" )
    moves = incremental_strategy( T, k );
  else if ( strategy == "lmt" )
    moves = lmt_strategy( T );
  else
    moves = knill_optimal( T, k ).moves;
  auto budget = k ? k : T;
  auto r = validate( moves, T, std::max( budget, T ) );
  auto within = validate( moves, T, budget );
  std::cout << strategy << ": T=" << T << ", " << r.steps << " steps, peak " << r.peak << ", " << r.placements
            << " placements\n";
  if ( show_moves )
    std::cout << to_string( moves ) << "\n";
  if ( !within.ok )
  {
    std::cout << "violation at move " << within.violation_at << ": " << within.violation << "\n";
    return exit_verify;
  }
  return exit_ok;
}

int cmd_pebble_table( std::size_t max_T, std::vector<std::size_t> const& ks, std::string const& out )
{
  std::ostringstream os;
  write_tradeoff_csv( os, tradeoff_table( max_T, ks ) );
  if ( out.empty() )
    std::cout << os.str();
  else
    write_file( out, os.str() );
  return exit_ok;
}

int cmd_blif( std::vector<std::string> const& args, bool optimize_xor, std::string const& report, std::uint64_t seed )
{
  std::vector<std::string> files;
  for ( auto const& a : args )
  {
    if ( !std::filesystem::is_directory( a ) )
    {
      files.push_back( a );
      continue;
    }
    std::vector<std::string> found;
    for ( auto const& f : std::filesystem::directory_iterator( a ) )
      if ( is_blif( f.path().string() ) )
        found.push_back( f.path().string() );
    std::sort( found.begin(), found.end() );
    files.insert( files.end(), found.begin(), found.end() );
  }
  json rows = json::array();
  bool failed = false;
  std::cout << std::left << std::setw( 18 ) << "name" << std::right << std::setw( 8 ) << "eager" << std::setw( 9 ) << "gates"
            << std::setw( 9 ) << "bennett" << std::setw( 9 ) << "gates" << std::setw( 11 ) << "reduction%" << std::setw( 10 )
            << "time" << "  verify\n";
  for ( auto const& f : files )
  {
    auto name = std::filesystem::path( f ).stem().string();
    BlifNetlist n;
    try
    {
      n = parse_blif( slurp( f ) );
    }
    catch ( std::exception const& e )
    {
      std::cout << std::left << std::setw( 18 ) << name << " skipped: " << e.what() << "\n";
      rows.push_back( { { "name", name }, { "skipped", e.what() } } );
      continue;
    }
    auto flat = lower_to_flat( optimize_xor ? reorder_blif( n ) : n );
    auto samples = n.inputs.size() <= 16 ? std::size_t{ 1 } << n.inputs.size() : std::size_t{ 1000 };
    json row{ { "name", name }, { "inputs", n.inputs.size() }, { "outputs", n.outputs.size() }, { "optimize_xor", optimize_xor } };
    bool ok = true;
    Compilation by[2];
    for ( auto s : { Strategy::eager, Strategy::bennett } )
    {
      CompileOptions o;
      o.strategy = s;
      auto& c = by[s == Strategy::bennett];
      c = compile( flat, o );
      auto r = verify( c.circuit, [&]( BitVector const& u ) { return evaluate_blif( n, u ); }, samples, seed );
      ok = ok && r.ok();
      row[to_string( s )] = { { "qubits", c.stats.qubit_count }, { "gates", c.circuit.gates.size() },
                              { "toffoli", c.stats.toffoli_count }, { "mismatches", r.mismatches } };
    }
    auto eq = by[0].stats.qubit_count, bq = by[1].stats.qubit_count;
    double reduction = bq ? 100.0 * ( double( bq ) - double( eq ) ) / double( bq ) : 0.0;
    row["qubit_reduction_percent"] = reduction;
    row["verified"] = ok;
    rows.push_back( row );
    failed = failed || !ok;
    std::cout << std::left << std::setw( 18 ) << name << std::right << std::setw( 8 ) << eq << std::setw( 9 )
              << by[0].circuit.gates.size() << std::setw( 9 ) << bq << std::setw( 9 ) << by[1].circuit.gates.size()
              << std::setw( 11 ) << std::fixed << std::setprecision( 2 ) << reduction << std::setw( 10 ) << std::setprecision( 4 )
              << by[0].seconds << "  " << ( ok ? "ok" : "FAIL" ) << "\n";
  }
  if ( !report.empty() )
    write_file( report, json{ { "rows", rows } }.dump( 2 ) + "\n" );
  return failed ? exit_verify : exit_ok;
}

} // namespace

namespace
{

struct CorpusEntry
{
  std::string file;
  ParamMap params;
};

std::vector<CorpusEntry> corpus_entries()
{
  std::vector<CorpusEntry> v;
  for ( long long n : { 4, 10, 20, 40 } )
    v.push_back( { "adder_ripple.rev", { { "n", n } } } );
  for ( long long n : { 4, 10, 16 } )
    v.push_back( { "adder_select.rev", { { "n", n } } } );
  for ( long long r : { 1, 2 } )
    v.push_back( { "sha2.rev", { { "rounds", r } } } );
  for ( long long r : { 1, 2 } )
    v.push_back( { "md5.rev", { { "rounds", r } } } );
  for ( auto f : { "and.rev", "arrays.rev", "or_and.rev", "no_eager.rev" } )
    v.push_back( { f, {} } );
  return v;
}

std::string describe( CorpusEntry const& e )
{
  std::string s = e.file;
  for ( auto const& [k, val] : e.params )
    s += " " + k + "=" + std::to_string( val );
  return s;
}

/// Compiles every corpus program with every strategy and verifies it.
int cmd_corpus( std::string const& dir, std::size_t samples, std::uint64_t seed, std::string const& report )
{
  json rows = json::array();
  bool failed = false;
  auto line = [&]( std::string const& what, Strategy s, Compilation const& c, VerifyReport const& r ) {
    std::cout << std::left << std::setw( 28 ) << what << std::setw( 12 ) << to_string( s ) << std::right << std::setw( 7 )
              << c.stats.qubit_count << " qubits" << std::setw( 8 ) << c.stats.toffoli_count << " toffoli  "
              << ( r.ok() ? "ok" : "FAIL" ) << "\n";
    auto j = report_json( c );
    j["program"] = what;
    j["mismatches"] = r.mismatches;
    j["verified"] = r.ok();
    rows.push_back( j );
    failed = failed || !r.ok();
  };

  for ( auto const& e : corpus_entries() )
  {
    auto flat = compile_source( slurp( dir + "/" + e.file ), e.params );
    std::size_t eager_width = 0;
    for ( auto s : { Strategy::bennett, Strategy::eager, Strategy::incremental } )
    {
      CompileOptions o;
      o.strategy = s;
      o.qubit_budget = eager_width;
      auto c = compile( flat, o );
      if ( s == Strategy::eager )
        eager_width = c.stats.qubit_count;
      line( describe( e ), s, c, verify( c.program, c.circuit, samples, seed ) );
    }
  }

  std::vector<std::string> blifs;
  if ( std::filesystem::is_directory( dir + "/blif" ) )
    for ( auto const& f : std::filesystem::directory_iterator( dir + "/blif" ) )
      if ( f.path().extension() == ".blif" )
        blifs.push_back( f.path().string() );
  std::sort( blifs.begin(), blifs.end() );
  for ( auto const& f : blifs )
  {
    auto n = parse_blif( slurp( f ) );
    auto reference = [&]( BitVector const& u ) { return evaluate_blif( n, u ); };
    for ( bool opt : { false, true } )
      for ( auto s : { Strategy::bennett, Strategy::eager } )
      {
        CompileOptions o;
        o.strategy = s;
        auto c = compile( lower_to_flat( opt ? reorder_blif( n ) : n ), o );
        auto name = "blif/" + std::filesystem::path( f ).filename().string() + ( opt ? " xor" : "" );
        line( name, s, c, verify( c.circuit, reference, samples, seed ) );
      }
  }
  if ( !report.empty() )
    write_file( report, json{ { "rows", rows } }.dump( 2 ) + "\n" );
  std::cout << ( failed ? "corpus: FAILED" : "corpus: all verified" ) << "\n";
  return failed ? exit_verify : exit_ok;
}

} // namespace

#ifndef REVS_CORPUS_DIR
#define REVS_CORPUS_DIR "corpus"
#endif

int main( int argc, char** argv )
{
  CLI::App app{ "revc: compile irreversible programs into Toffoli networks" };
  app.require_subcommand( 1 );
  std::function<int()> run;

  Source src;
  std::string out, dot, report, bits;
  bool timing = false, show_moves = false;
  std::size_t samples = 200, T = 10, k = 0, max_T = 32;
  std::uint64_t seed = 0;
  std::string pebble_strategy = "bennett", corpus_dir = REVS_CORPUS_DIR;
  std::vector<std::size_t> ks = { 2, 3, 4, 5, 6, 8 };
  std::vector<std::string> files;
  bool optimize_xor = false;

  auto* compile_cmd = app.add_subcommand( "compile", "compile to a circuit" );
  src.add_to( compile_cmd );
  compile_cmd->add_option( "-o,--output", out, "circuit file (default: stdout)" );
  compile_cmd->add_option( "--emit-mdd", dot, "write the MDD in Graphviz format" );
  compile_cmd->add_option( "--report", report, "write the JSON report" );
  compile_cmd->add_flag( "--timing", timing, "include compile time in the report" );
  compile_cmd->callback( [&] { run = [&] { return cmd_compile( src, out, dot, report, timing ); }; } );

  auto* stats_cmd = app.add_subcommand( "stats", "print the JSON report" );
  src.add_to( stats_cmd );
  stats_cmd->add_flag( "--timing", timing, "include compile time" );
  stats_cmd->callback( [&] { run = [&] { return cmd_stats( src, timing ); }; } );

  auto* sim_cmd = app.add_subcommand( "sim", "simulate one input" );
  src.add_to( sim_cmd );
  sim_cmd->add_option( "--input", bits, "input bits, first input first" )->required();
  sim_cmd->callback( [&] { run = [&] { return cmd_sim( src, bits ); }; } );

  auto* verify_cmd = app.add_subcommand( "verify", "check the circuit against the interpreter" );
  src.add_to( verify_cmd );
  verify_cmd->add_option( "--samples", samples, "random samples (exhaustive if 2^inputs is not larger)" );
  verify_cmd->add_option( "--seed", seed, "sample seed (default: REVC_SEED or 1)" );
  verify_cmd->add_option( "--report", report, "write the JSON report" );
  verify_cmd->callback( [&] { run = [&] { return cmd_verify( src, samples, seed, report ); }; } );

  auto* pebble_cmd = app.add_subcommand( "pebble", "play the 1D reversible pebble game" );
  pebble_cmd->add_option( "--gates,-T", T, "line length" );
  pebble_cmd->add_option( "--pebbles,-k", k, "pebble budget" );
  pebble_cmd->add_option( "--strategy", pebble_strategy, "bennett, incremental, lmt or optimal" )
      ->check( CLI::IsMember( { "bennett", "incremental", "lmt", "optimal" } ) );
  pebble_cmd->add_flag( "--moves", show_moves, "print the move list" );
  pebble_cmd->callback( [&] {
    run = [&] {
      if ( ( pebble_strategy == "incremental" || pebble_strategy == "optimal" ) && k == 0 )
        throw user_error( "--strategy " + pebble_strategy + " requires --pebbles" );
      return cmd_pebble( T, k, pebble_strategy, show_moves );
    };
  } );

  auto* table_cmd = app.add_subcommand( "pebble-table", "optimal step counts as CSV" );
  table_cmd->add_option( "--max", max_T, "largest line length" );
  table_cmd->add_option( "--pebbles,-k", ks, "pebble budgets" );
  table_cmd->add_option( "-o,--output", out, "CSV file (default: stdout)" );
  table_cmd->callback( [&] { run = [&] { return cmd_pebble_table( max_T, ks, out ); }; } );

  auto* blif_cmd = app.add_subcommand( "blif", "eager vs Bennett table over BLIF netlists" );
  blif_cmd->add_option( "files", files, "netlists or directories of them" )->required();
  blif_cmd->add_flag( "--optimize-xor", optimize_xor, "group exclusive cubes before lowering" );
  blif_cmd->add_option( "--report", report, "write the JSON rows" );
  blif_cmd->add_option( "--seed", seed, "sample seed for large netlists" );
  blif_cmd->callback( [&] { run = [&] { return cmd_blif( files, optimize_xor, report, seed ); }; } );

  auto* corpus_cmd = app.add_subcommand( "corpus", "regression over the bundled programs" );
  corpus_cmd->add_option( "--dir", corpus_dir, "corpus directory" );
  corpus_cmd->add_option( "--samples", samples, "samples per program" );
  corpus_cmd->add_option( "--seed", seed, "sample seed" );
  corpus_cmd->add_option( "--report", report, "write the JSON rows" );
  corpus_cmd->callback( [&] { run = [&] { return cmd_corpus( corpus_dir, samples, seed, report ); }; } );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return e.get_exit_code() == 0 ? exit_ok : exit_user;
  }

  try
  {
    if ( seed == 0 )
      seed = default_seed();
    return run();
  }
  catch ( user_error const& e )
  {
    std::cerr << "revc: " << e.what() << "\n";
  }
  catch ( source_error const& e )
  {
    std::cerr << "revc: " << src.path << ( e.line ? ":" : ": " ) << e.what() << "\n";
  }
  catch ( blif_error const& e )
  {
    std::cerr << "revc: " << e.what() << "\n";
  }
  catch ( budget_error const& e )
  {
    std::cerr << "revc: " << e.what() << "\n";
  }
  catch ( std::exception const& e )
  {
    std::cerr << "revc: " << e.what() << "\n";
  }
  return exit_user;
}
