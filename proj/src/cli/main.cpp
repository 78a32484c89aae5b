// Command-line front end: circuit building, T-count analytics, QHE runs,
// plain walk sampling, oracle evolution, and distribution comparison.
//
// Exit codes: 0 success, 1 comparison failure, 2 usage/spec error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cqsim/json_io.hpp"
#include "cqsim/simulate.hpp"
#include "oracle/oracle.hpp"
#include "qhe/qhe.hpp"
#include "szegedy/szegedy.hpp"

namespace {

using json = nlohmann::json;

struct GraphOpts {
  std::string graph;
  int nodes{0};
  int n2{0};
};

void add_graph_options(CLI::App* cmd, GraphOpts& g) {
  cmd->add_option("--graph", g.graph, "cycle|complete|bipartite")->required();
  cmd->add_option("--nodes", g.nodes, "node count (N1 for bipartite)")->required();
  cmd->add_option("--n2", g.n2, "N2 (bipartite only)");
}

szegedy::GraphSpec make_graph(const GraphOpts& g) {
  if (g.graph == "cycle") return szegedy::GraphSpec::cycle(g.nodes);
  if (g.graph == "complete") return szegedy::GraphSpec::complete(g.nodes);
  if (g.graph == "bipartite")
    return szegedy::GraphSpec::bipartite(g.nodes, g.n2 > 0 ? g.n2 : g.nodes);
  throw std::invalid_argument("unknown graph kind: " + g.graph);
}

szegedy::CompileLevel parse_level(const std::string& s) {
  if (s == "exact") return szegedy::CompileLevel::Exact;
  if (s == "clifford_t") return szegedy::CompileLevel::CliffordT;
  throw std::invalid_argument("unknown compile level: " + s);
}

// "--init": either a node index or a comma-separated weight list over nodes.
std::vector<double> parse_init(const std::string& spec, int n_nodes) {
  std::vector<double> w(n_nodes, 0.0);
  if (spec.find(',') == std::string::npos &&
      spec.find('.') == std::string::npos) {
    const int node = std::stoi(spec);
    if (node < 0 || node >= n_nodes)
      throw std::invalid_argument("--init node index out of range");
    w[node] = 1.0;
    return w;
  }
  std::stringstream ss(spec);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',')) {
    if (i >= n_nodes) throw std::invalid_argument("--init: too many weights");
    w[i++] = std::stod(tok);
  }
  double sum = 0.0;
  for (double v : w) {
    if (v < 0.0) throw std::invalid_argument("--init: negative weight");
    sum += v;
  }
  if (sum <= 0.0) throw std::invalid_argument("--init: zero total weight");
  for (double& v : w) v /= sum;
  return w;
}

// State sqrt(w_0)|0>_1|0...> + ... over `width` qubits, register 1 = first
// n qubits (big-endian).
cqsim::StateVector weighted_basis_state(const std::vector<double>& w, int n,
                                        int width) {
  std::vector<cqsim::cplx> amps(std::size_t(1) << width, cqsim::cplx{});
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] > 0.0) amps[i << (width - n)] = std::sqrt(w[i]);
  return cqsim::StateVector::from_amplitudes(width, std::move(amps));
}

void append_circuit(cqsim::Circuit& dst, const cqsim::Circuit& src) {
  for (const cqsim::Instruction& in : src.instructions()) dst.add(in);
}

// [V; U_w^steps] with optional register-1 measurement into cbits [0, n).
cqsim::Circuit walk_with_prep(const szegedy::GraphSpec& g, int steps,
                              szegedy::CompileLevel level, bool measure) {
  const int n = g.reg_width();
  cqsim::Circuit V = szegedy::build_update(g);
  if (level == szegedy::CompileLevel::CliffordT)
    V = szegedy::expand_clifford_t(V);
  const szegedy::WalkCircuit step = szegedy::build_walk_step(g, level);
  const int width = std::max(V.n_qubits(), step.circuit.n_qubits());
  cqsim::Circuit c(width, measure ? n : 0);
  append_circuit(c, V);
  for (int t = 0; t < steps; ++t) append_circuit(c, step.circuit);
  if (measure)
    for (int k = 0; k < n; ++k) c.measure(k, k);
  return c;
}

// Histogram over (n_steps * n_bits)-bit strings -> per-step node marginals.
std::vector<std::vector<double>> hist_to_trajectory(
    const std::map<std::string, std::uint64_t>& hist, int n_bits, int n_steps,
    int n_nodes) {
  std::vector<std::vector<double>> traj(n_steps,
                                        std::vector<double>(n_nodes, 0.0));
  std::uint64_t total = 0;
  for (const auto& [k, v] : hist) total += v;
  for (const auto& [bits, count] : hist) {
    for (int s = 0; s < n_steps; ++s) {
      const int node = static_cast<int>(
          std::stoul(bits.substr(std::size_t(s) * n_bits, n_bits), nullptr, 2));
      if (node < n_nodes)
        traj[s][node] += static_cast<double>(count) / static_cast<double>(total);
    }
  }
  return traj;
}

// Reads either trajectory CSV (step,node,probability) or histogram CSV
// (bitstring,count; normalized as a one-step distribution).
std::vector<std::vector<double>> read_distribution_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::string header;
  std::getline(f, header);
  if (header == "step,node,probability")
    return cqsim::read_trajectory_csv(path);
  if (header != "bitstring,count")
    throw std::invalid_argument(path + ": unrecognized CSV header");
  const std::map<std::string, std::uint64_t> hist =
      cqsim::read_histogram_csv(path);
  int n_bits = 0;
  std::uint64_t total = 0;
  for (const auto& [k, v] : hist) {
    n_bits = static_cast<int>(k.size());
    total += v;
  }
  std::vector<double> p(std::size_t(1) << n_bits, 0.0);
  for (const auto& [k, v] : hist)
    p[std::stoul(k, nullptr, 2)] =
        static_cast<double>(v) / static_cast<double>(total);
  return {p};
}

double total_variation(const std::vector<double>& a, const std::vector<double>& b) {
  double tv = 0.0;
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    tv += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
  return 0.5 * tv;
}

void write_report_json(const qhe::XorCountReport& r, const std::string& path) {
  json j{{"L", r.L}, {"n", r.n}, {"xor_ops", r.xor_ops}, {"bound", r.bound}};
  std::ofstream f(path);
  f << j.dump(2) << "\n";
}

std::string bits_string(const std::vector<std::uint8_t>& v) {
  std::string s;
  for (std::uint8_t b : v) s.push_back(b ? '1' : '0');
  return s;
}

void write_trace_csv(const std::vector<qhe::ShotTrace>& traces,
                     const std::string& path) {
  std::ofstream f(path);
  f << "shot,initial_x,initial_z,final_x,final_z,bell_ra,bell_rb,encrypted,"
       "decrypted\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const qhe::ShotTrace& t = traces[i];
    std::string ra, rb;
    for (const qhe::BellOutcome& o : t.bell_outcomes) {
      ra.push_back(o.r_a ? '1' : '0');
      rb.push_back(o.r_b ? '1' : '0');
    }
    f << i << ',' << bits_string(t.initial_key.x) << ','
      << bits_string(t.initial_key.z) << ',' << bits_string(t.final_key.x)
      << ',' << bits_string(t.final_key.z) << ',' << ra << ',' << rb << ','
      << t.encrypted << ',' << t.decrypted << "\n";
  }
}

std::string term_string(const szegedy::TCountTerm& t,
                        const std::optional<long long>& L_R) {
  if (t.c1 == 0) return std::to_string(t.c0);
  if (L_R) return std::to_string(t.c0 + t.c1 * *L_R);
  return std::to_string(t.c0) + " + " + std::to_string(t.c1) + "*L_R";
}

json term_json(const szegedy::TCountTerm& t) {
  return json{{"c0", t.c0}, {"c1", t.c1}};
}

int cmd_tcount(const GraphOpts& go, std::optional<double> eps,
               const std::string& format, const std::string& out) {
  const szegedy::GraphSpec g = make_graph(go);
  const szegedy::TCountReport r = szegedy::t_count(g, eps);
  std::ostringstream os;
  if (format == "json") {
    json j{{"graph", go.graph},
           {"nodes", go.nodes},
           {"L_V", term_json(r.L_V)},
           {"L_U", term_json(r.L_U)},
           {"formula_used", r.formula_used}};
    if (go.n2 > 0) j["n2"] = go.n2;
    if (r.L_R) j["L_R"] = *r.L_R;
    if (r.L_CX) j["L_CX"] = term_json(*r.L_CX);
    if (r.L_CH) j["L_CH"] = term_json(*r.L_CH);
    if (r.L_CA) j["L_CA"] = term_json(*r.L_CA);
    if (r.L_CR) j["L_CR"] = term_json(*r.L_CR);
    if (!r.L_Pplus.empty()) j["L_Pplus"] = r.L_Pplus;
    os << j.dump(2) << "\n";
  } else {
    os << "graph      " << go.graph << " N=" << go.nodes;
    if (go.n2 > 0) os << " N2=" << go.n2;
    os << "\n";
    os << "L_V      = " << term_string(r.L_V, r.L_R) << "\n";
    os << "L_U      = " << term_string(r.L_U, r.L_R) << "\n";
    if (r.L_R) os << "L_R      = " << *r.L_R << "\n";
    if (r.L_CX) os << "L_CX     = " << term_string(*r.L_CX, r.L_R) << "\n";
    if (r.L_CH) os << "L_CH     = " << term_string(*r.L_CH, r.L_R) << "\n";
    if (r.L_CA) os << "L_CA     = " << term_string(*r.L_CA, r.L_R) << "\n";
    if (r.L_CR) os << "L_CR     = " << term_string(*r.L_CR, r.L_R) << "\n";
    if (!r.L_Pplus.empty()) {
      os << "L_P+     =";
      for (long long v : r.L_Pplus) os << ' ' << v;
      os << "\n";
    }
    os << "source     " << (r.formula_used ? "closed form" : "circuit count")
       << "\n";
  }
  if (out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(out);
    f << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Szegedy walk circuits with homomorphic evaluation"};
  app.require_subcommand(1);

  // --- build ---
  GraphOpts b_go;
  std::string b_level = "exact", b_out;
  int b_tq = 0, b_tf = 0, b_steps = 1;
  CLI::App* build = app.add_subcommand("build", "emit a circuit as JSON");
  add_graph_options(build, b_go);
  build->add_option("--level", b_level, "exact|clifford_t");
  build->add_option("--steps", b_steps, "walk steps after V (default 1)");
  build->add_option("--tq", b_tq, "semiclassical quantum steps");
  build->add_option("--tf", b_tf, "semiclassical classical steps");
  build->add_option("--out", b_out, "output circuit JSON")->required();

  // --- tcount ---
  GraphOpts t_go;
  std::string t_format = "table", t_out;
  double t_eps = 0.0;
  CLI::App* tcount = app.add_subcommand("tcount", "closed-form T counts");
  add_graph_options(tcount, t_go);
  tcount->add_option("--eps", t_eps, "rotation synthesis accuracy (complete)");
  tcount->add_option("--format", t_format, "table|json");
  tcount->add_option("--out", t_out, "write to file instead of stdout");

  // --- run-qhe ---
  GraphOpts q_go;
  std::string q_circuit, q_mode = "realistic", q_prefix, q_init = "0";
  std::uint64_t q_shots = 0, q_seed = 0;
  int q_steps = 1, q_tq = 0, q_tf = 0, q_nprot = -1;
  bool q_trace = false;
  CLI::App* runqhe =
      app.add_subcommand("run-qhe", "encrypted evaluation with decryption");
  runqhe->add_option("--circuit", q_circuit, "circuit JSON file");
  runqhe->add_option("--graph", q_go.graph, "cycle|complete|bipartite");
  runqhe->add_option("--nodes", q_go.nodes, "node count");
  runqhe->add_option("--n2", q_go.n2, "N2 (bipartite)");
  runqhe->add_option("--steps", q_steps, "walk steps (default 1)");
  runqhe->add_option("--tq", q_tq, "semiclassical quantum steps");
  runqhe->add_option("--tf", q_tf, "semiclassical classical steps");
  runqhe->add_option("--mode", q_mode, "realistic|simplified");
  runqhe->add_option("--shots", q_shots, "shot count")->required();
  runqhe->add_option("--seed", q_seed, "RNG seed")->required();
  runqhe->add_option("--out-prefix", q_prefix, "output file prefix")->required();
  runqhe->add_option("--init", q_init, "start node or weight list (graph mode)");
  runqhe->add_option("--n-protected", q_nprot, "encrypted qubit count");
  runqhe->add_flag("--trace-keys", q_trace, "write per-shot key trace CSV");

  // --- run-walk ---
  GraphOpts w_go;
  std::string w_level = "exact", w_out, w_init = "0";
  std::uint64_t w_shots = 0, w_seed = 0;
  int w_steps = 1;
  CLI::App* runwalk =
      app.add_subcommand("run-walk", "sample the plain quantum walk");
  add_graph_options(runwalk, w_go);
  runwalk->add_option("--level", w_level, "exact|clifford_t");
  runwalk->add_option("--steps", w_steps, "walk steps");
  runwalk->add_option("--init", w_init, "start node or weight list");
  runwalk->add_option("--shots", w_shots, "shot count")->required();
  runwalk->add_option("--seed", w_seed, "RNG seed")->required();
  runwalk->add_option("--out", w_out, "distribution CSV")->required();

  // --- run-semiclassical ---
  GraphOpts s_go;
  std::string s_level = "exact", s_out, s_init = "0";
  std::uint64_t s_shots = 0, s_seed = 0;
  int s_tq = 1, s_tf = 1;
  CLI::App* runsemi =
      app.add_subcommand("run-semiclassical", "sample the semiclassical walk");
  add_graph_options(runsemi, s_go);
  runsemi->add_option("--level", s_level, "exact|clifford_t");
  runsemi->add_option("--tq", s_tq, "quantum steps per cycle")->required();
  runsemi->add_option("--tf", s_tf, "classical steps")->required();
  runsemi->add_option("--init", s_init, "start node or weight list");
  runsemi->add_option("--shots", s_shots, "shot count")->required();
  runsemi->add_option("--seed", s_seed, "RNG seed")->required();
  runsemi->add_option("--out", s_out, "trajectory CSV")->required();

  // --- compare ---
  std::string c_a, c_b;
  double c_threshold = 0.0;
  int c_uniform = 0;
  CLI::App* compare =
      app.add_subcommand("compare", "total-variation distance of two files");
  compare->add_option("--a", c_a, "first CSV (histogram or trajectory)")
      ->required();
  compare->add_option("--b", c_b, "second CSV");
  compare->add_option("--uniform-over", c_uniform,
                      "compare --a against uniform over N outcomes");
  compare->add_option("--threshold", c_threshold, "max allowed TV")->required();

  // --- oracle ---
  CLI::App* orc = app.add_subcommand("oracle", "dense-matrix reference");
  orc->require_subcommand(1);
  GraphOpts ow_go;
  std::string ow_out, ow_init = "0";
  int ow_steps = 1;
  CLI::App* owalk = orc->add_subcommand("walk", "exact walk distribution");
  add_graph_options(owalk, ow_go);
  owalk->add_option("--steps", ow_steps, "walk steps");
  owalk->add_option("--init", ow_init, "start node or weight list");
  owalk->add_option("--out", ow_out, "trajectory CSV")->required();
  GraphOpts os_go;
  std::string os_out, os_init = "0";
  int os_tq = 1, os_tf = 1;
  CLI::App* osemi =
      orc->add_subcommand("semiclassical", "exact semiclassical trajectory");
  add_graph_options(osemi, os_go);
  osemi->add_option("--tq", os_tq, "quantum steps per cycle")->required();
  osemi->add_option("--tf", os_tf, "classical steps")->required();
  osemi->add_option("--p0", os_init, "start node or probability list");
  osemi->add_option("--out", os_out, "trajectory CSV")->required();

  try {
    app.parse(argc, argv);

    if (build->parsed()) {
      const szegedy::GraphSpec g = make_graph(b_go);
      const szegedy::CompileLevel level = parse_level(b_level);
      cqsim::Circuit c = b_tf > 0
                             ? szegedy::build_semiclassical(g, b_tq, b_tf, level)
                             : walk_with_prep(g, b_steps, level, false);
      cqsim::write_circuit_file(c, b_out);
      std::cout << "wrote " << b_out << " (" << c.n_qubits() << " qubits, "
                << c.size() << " instructions, T count " << c.t_count() << ")\n";
      return 0;
    }

    if (tcount->parsed()) {
      std::optional<double> eps;
      if (t_eps > 0.0) eps = t_eps;
      return cmd_tcount(t_go, eps, t_format, t_out);
    }

    if (runqhe->parsed()) {
      const qhe::Mode mode =
          q_mode == "simplified" ? qhe::Mode::Simplified : qhe::Mode::Realistic;
      cqsim::Circuit circuit;
      cqsim::StateVector init;
      int n_nodes_out = 0, n_bits = 0, n_steps_out = 1;
      if (!q_circuit.empty()) {
        circuit = cqsim::read_circuit_file(q_circuit);
        init = cqsim::StateVector::zero_state(circuit.n_qubits());
      } else {
        const szegedy::GraphSpec g = make_graph(q_go);
        circuit = q_tf > 0 ? szegedy::build_semiclassical(
                                 g, q_tq, q_tf, szegedy::CompileLevel::CliffordT)
                           : walk_with_prep(g, q_steps,
                                            szegedy::CompileLevel::CliffordT, true);
        const std::vector<double> w = parse_init(q_init, g.walk_nodes());
        init = weighted_basis_state(w, g.reg_width(), circuit.n_qubits());
        n_nodes_out = g.original_nodes();
        n_bits = g.reg_width();
        n_steps_out = q_tf > 0 ? q_tf + 1 : 1;
      }
      const qhe::QheResult res =
          run_qhe(circuit, init, mode, q_shots, q_seed, q_nprot, q_trace);
      cqsim::write_histogram_csv(res.encrypted_hist, q_prefix + ".encrypted.csv");
      cqsim::write_histogram_csv(res.decrypted_hist, q_prefix + ".decrypted.csv");
      write_report_json(res.report, q_prefix + ".report.json");
      if (q_trace) write_trace_csv(res.traces, q_prefix + ".trace.csv");
      if (n_nodes_out > 0)
        cqsim::write_trajectory_csv(
            hist_to_trajectory(res.decrypted_hist, n_bits, n_steps_out,
                               n_nodes_out),
            q_prefix + ".decrypted.traj.csv");
      std::cout << "L=" << res.report.L << " n=" << res.report.n
                << " xor_ops=" << res.report.xor_ops
                << " bound=" << res.report.bound << "\n";
      return 0;
    }

    if (runwalk->parsed()) {
      const szegedy::GraphSpec g = make_graph(w_go);
      const cqsim::Circuit c =
          walk_with_prep(g, w_steps, parse_level(w_level), true);
      const std::vector<double> w = parse_init(w_init, g.walk_nodes());
      const cqsim::StateVector init =
          weighted_basis_state(w, g.reg_width(), c.n_qubits());
      const auto hist = cqsim::sample_cbits(c, init, w_shots, w_seed);
      cqsim::write_trajectory_csv(
          hist_to_trajectory(hist, g.reg_width(), 1, g.original_nodes()), w_out);
      std::cout << "wrote " << w_out << "\n";
      return 0;
    }

    if (runsemi->parsed()) {
      const szegedy::GraphSpec g = make_graph(s_go);
      const cqsim::Circuit c =
          szegedy::build_semiclassical(g, s_tq, s_tf, parse_level(s_level));
      const std::vector<double> w = parse_init(s_init, g.walk_nodes());
      const cqsim::StateVector init =
          weighted_basis_state(w, g.reg_width(), c.n_qubits());
      const auto hist = cqsim::sample_cbits(c, init, s_shots, s_seed);
      cqsim::write_trajectory_csv(
          hist_to_trajectory(hist, g.reg_width(), s_tf + 1, g.original_nodes()),
          s_out);
      std::cout << "wrote " << s_out << "\n";
      return 0;
    }

    if (compare->parsed()) {
      const auto a = read_distribution_file(c_a);
      std::vector<std::vector<double>> b;
      if (c_uniform > 0) {
        b.assign(a.size(),
                 std::vector<double>(c_uniform, 1.0 / static_cast<double>(c_uniform)));
      } else {
        if (c_b.empty())
          throw std::invalid_argument("compare: need --b or --uniform-over");
        b = read_distribution_file(c_b);
      }
      if (a.size() != b.size())
        throw std::invalid_argument("compare: step counts differ");
      double worst_tv = 0.0, worst_dev = 0.0;
      for (std::size_t s = 0; s < a.size(); ++s) {
        const double tv = total_variation(a[s], b[s]);
        worst_tv = std::max(worst_tv, tv);
        const std::size_t n = std::max(a[s].size(), b[s].size());
        for (std::size_t i = 0; i < n; ++i)
          worst_dev = std::max(
              worst_dev, std::abs((i < a[s].size() ? a[s][i] : 0.0) -
                                  (i < b[s].size() ? b[s][i] : 0.0)));
        std::cout << "step " << s << ": TV = " << tv << "\n";
      }
      std::cout << "max TV = " << worst_tv << ", max per-node deviation = "
                << worst_dev << ", threshold = " << c_threshold << " -> "
                << (worst_tv <= c_threshold ? "PASS" : "FAIL") << "\n";
      return worst_tv <= c_threshold ? 0 : 1;
    }

    if (owalk->parsed()) {
      const szegedy::GraphSpec g = make_graph(ow_go);
      const oracle::WalkOperator w =
          oracle::walk_unitary(szegedy::transition_matrix(g));
      const std::vector<double> weights = parse_init(ow_init, g.walk_nodes());
      oracle::CVec init = oracle::CVec::Zero(w.psi.rows());
      for (int i = 0; i < g.walk_nodes(); ++i)
        if (weights[i] > 0.0) init += std::sqrt(weights[i]) * w.psi.col(i);
      init.normalize();
      const oracle::Vec p = oracle::evolve_distribution(w, init, ow_steps);
      cqsim::write_trajectory_csv(
          {std::vector<double>(p.data(), p.data() + g.original_nodes())},
          ow_out);
      std::cout << "wrote " << ow_out << "\n";
      return 0;
    }

    if (osemi->parsed()) {
      const szegedy::GraphSpec g = make_graph(os_go);
      const oracle::Mat Gq =
          oracle::semiclassical_matrix(szegedy::transition_matrix(g), os_tq);
      const std::vector<double> w = parse_init(os_init, g.walk_nodes());
      oracle::Vec p0 = oracle::Vec::Zero(g.walk_nodes());
      for (int i = 0; i < g.walk_nodes(); ++i) p0(i) = w[i];
      std::vector<std::vector<double>> traj;
      for (const oracle::Vec& p : oracle::semiclassical_evolve(p0, Gq, os_tf))
        traj.emplace_back(p.data(), p.data() + g.original_nodes());
      cqsim::write_trajectory_csv(traj, os_out);
      std::cout << "wrote " << os_out << "\n";
      return 0;
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
