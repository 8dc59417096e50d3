// cgc: batch front-end for the library. Each subcommand maps onto one
// library operation; all mathematics lives in the headers.

#include <CLI11.hpp>

#include <atomic>
#include <complex>
#include <cstring>
#include <iostream>
#include <random>
#include <thread>

#include "cgc/catalog.hpp"
#include "cgc/cohomology.hpp"
#include "cgc/report.hpp"
#include "cgc/roe.hpp"
#include "cgc/sos.hpp"
#include "cgc/spectral.hpp"
#include "cgc/topology.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitComputation = 2;
constexpr int kExitVerification = 3;

struct CommonOpts {
  std::string catalog;
  int m = 0;
  int p = 0;
  std::string range;
  int radius = 0;
  double epsilon = 1e-3;
  double tol = 1e-9;
  int jobs = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  bool json_errors = false;

  std::string config_string(const std::string& command) const {
    return command + "|" + catalog + "|" + std::to_string(m) + "|" +
           std::to_string(p) + "|" + range + "|" + std::to_string(radius) +
           "|" + cgc::format_double(epsilon) + "|" + cgc::format_double(tol) +
           "|" + std::to_string(seed);
  }
};

std::pair<int, int> parse_range(const std::string& text) {
  for (const char* sep : {"..", ":", "-"}) {
    auto pos = text.find(sep);
    if (pos != std::string::npos && pos > 0) {
      int lo = std::stoi(text.substr(0, pos));
      int hi = std::stoi(text.substr(pos + std::strlen(sep)));
      return {lo, hi};
    }
  }
  throw cgc::IoError("cannot parse range \"" + text + "\" (use lo..hi)");
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// --catalog is a builtin family name (cyclic, sl2) combined with --m/--p or
// --range, or a path to a JSON catalog file.
std::vector<cgc::GroupPtr> resolve_groups(const CommonOpts& opts) {
  if (opts.catalog == "cyclic") {
    std::vector<cgc::GroupPtr> groups;
    if (!opts.range.empty()) {
      auto [lo, hi] = parse_range(opts.range);
      for (int m = lo; m <= hi; ++m) groups.push_back(cgc::build_cyclic(m));
    } else {
      groups.push_back(cgc::build_cyclic(opts.m > 0 ? opts.m : 1));
    }
    return groups;
  }
  if (opts.catalog == "sl2") {
    std::vector<cgc::GroupPtr> groups;
    if (!opts.range.empty()) {
      auto [lo, hi] = parse_range(opts.range);
      for (int p = lo; p <= hi; ++p)
        if (is_prime(p)) groups.push_back(cgc::build_sl2(p));
    } else {
      groups.push_back(cgc::build_sl2(opts.p > 0 ? opts.p : 2));
    }
    return groups;
  }
  if (opts.catalog.empty())
    throw cgc::IoError("no catalog given (use --catalog)");
  return cgc::load_catalog(opts.catalog);
}

void emit(const CommonOpts& opts, const std::string& content) {
  if (opts.out.empty())
    std::cout << content;
  else
    cgc::write_file(opts.out, content);
}

void stamp(cgc::Json& j, const CommonOpts& opts, const std::string& command) {
  j["config_hash"] = cgc::hash_hex(cgc::fnv1a(opts.config_string(command)));
  j["seed"] = opts.seed;
}

std::vector<cgc::SpectrumReport> family_reports(
    const std::vector<cgc::GroupPtr>& groups, int jobs) {
  if (jobs <= 1) return cgc::family_gaps(groups);
  std::vector<cgc::SpectrumReport> reports(groups.size());
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < groups.size();) {
        try {
          reports[i] = cgc::spectral_gap(groups[i]);
        } catch (const cgc::Error& e) {
          reports[i].label = groups[i]->label();
          reports[i].order = groups[i]->order();
          reports[i].error = e.what();
        }
      }
    });
  for (auto& th : pool) th.join();
  return reports;
}

int cmd_gap(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  cgc::SpectrumReport r = cgc::spectral_gap(groups.front());
  std::cout << "nu = " << cgc::format_double(r.nu) << "\n";
  return kExitOk;
}

int cmd_family(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  auto reports = family_reports(groups, opts.jobs);
  std::string hash = cgc::hash_hex(cgc::fnv1a(opts.config_string("family")));
  if (opts.format == "json") {
    cgc::Json j;
    stamp(j, opts, "family");
    cgc::Json rows = cgc::Json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      cgc::Json row;
      row["index"] = i;
      row["label"] = r.label;
      row["order"] = r.order;
      row["nu"] = cgc::rounded_double(r.nu);
      row["lambda_max"] = cgc::rounded_double(r.lambda_max);
      row["method"] = r.method;
      row["residual"] = cgc::rounded_double(r.residual);
      if (!r.error.empty()) row["error"] = r.error;
      rows.push_back(std::move(row));
    }
    j["reports"] = std::move(rows);
    try {
      j["verdict"] = cgc::verdict_json(cgc::expander_verdict(reports));
    } catch (const cgc::InsufficientData&) {
    }
    emit(opts, j.dump(2) + "\n");
  } else {
    std::string csv = cgc::spectrum_csv(reports);
    csv += "# config_hash=" + hash + " seed=" + std::to_string(opts.seed) + "\n";
    emit(opts, csv);
  }
  return kExitOk;
}

int cmd_converge(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  int radius = opts.radius > 0 ? opts.radius : 2;
  cgc::StabilizationReport report = cgc::detect_convergence(groups, radius);
  cgc::Json j = cgc::stabilization_json(report);
  stamp(j, opts, "converge");
  emit(opts, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_partition(const CommonOpts& opts,
                  const std::vector<std::string>& relator_files) {
  auto groups = resolve_groups(opts);
  if (groups.empty()) throw cgc::IoError("empty catalog");
  const int k = groups.front()->k();
  std::vector<std::vector<cgc::Word>> sets;
  for (const auto& path : relator_files)
    sets.push_back(cgc::load_relators(path, k));
  cgc::IndexPartition partition = cgc::partition_by_quotient(sets, groups);
  cgc::Json j;
  stamp(j, opts, "partition");
  cgc::Json classes = cgc::Json::array();
  for (const auto& [set_id, indices] : partition.classes) {
    cgc::Json c;
    c["relator_set"] = set_id;
    c["indices"] = indices;
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  j["residual"] = partition.residual;
  emit(opts, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_sos_certify(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  const cgc::GroupPtr& G = groups.front();
  int radius = opts.radius > 0 ? opts.radius : G->diameter();
  cgc::SosOptions sopts;
  sopts.tol = opts.tol;
  sopts.seed = opts.seed;
  cgc::CertifiedGapResult result =
      cgc::certified_gap_full(G, radius, opts.epsilon, sopts);
  cgc::Json j;
  stamp(j, opts, "sos-certify");
  j["nu_certified"] = cgc::rounded_double(result.nu);
  if (result.certificate) {
    const cgc::SosCertificate& cert = *result.certificate;
    cgc::GroupAlgElement delta = cgc::laplacian_group(G);
    cgc::GroupAlgElement target =
        cgc::conv(delta, delta) - delta * cert.nu +
        cgc::GroupAlgElement::delta(G, 0, cert.epsilon);
    cgc::VerifyResult check = cgc::verify_certificate(cert, target);
    j["certificate"] = cgc::certificate_json(cert);
    j["verified_residual_l1"] = cgc::rounded_double(check.residual_l1);
    emit(opts, j.dump(2) + "\n");
    if (check.residual_l1 > 1e-8 || !check.propagation_ok)
      return kExitVerification;
  } else {
    emit(opts, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_roe_avg(const CommonOpts& opts, int count) {
  auto groups = resolve_groups(opts);
  const cgc::GroupPtr& G = groups.front();
  const int n = G->order();
  int radius = opts.radius > 0 ? opts.radius : G->diameter();
  auto space = cgc::DisjointUnionSpace::from_group(G);

  // random inputs whose square sum is group-invariant by construction:
  // xi_i = f_i . embed(eta) with sum |f_i|^2 = 1
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  cgc::GroupAlgElement eta(G);
  for (int g : G->ball(radius)) eta.add(g, cgc::Scalar(dist(rng), dist(rng)));
  Eigen::MatrixXcd f(n, count);
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < count; ++i) f(x, i) = cgc::Scalar(dist(rng), dist(rng));
    f.row(x) /= f.row(x).norm();
  }
  std::vector<cgc::Kernel> inputs;
  cgc::Kernel base = cgc::group_algebra_embed(eta, space);
  for (int i = 0; i < count; ++i) {
    cgc::Kernel xi = cgc::diagonal_kernel(space, f.col(i)) * base;
    inputs.push_back(std::move(xi));
  }

  std::vector<cgc::GroupAlgElement> sos =
      cgc::roe_to_group_sos(inputs, G, radius);
  cgc::GroupAlgElement reassembled(G), target = cgc::conv(cgc::star(eta), eta);
  for (const auto& e : sos) reassembled += cgc::conv(cgc::star(e), e);
  double err = cgc::l1_norm(reassembled - target);
  std::size_t expected =
      static_cast<std::size_t>(count) * G->ball(radius).size();

  cgc::Json j;
  stamp(j, opts, "roe-avg");
  j["group"] = G->label();
  j["inputs"] = count;
  j["outputs"] = sos.size();
  j["expected_outputs"] = expected;
  j["reassembly_l1"] = cgc::rounded_double(err);
  emit(opts, j.dump(2) + "\n");
  if (err > 1e-9 || sos.size() != expected) return kExitVerification;
  return kExitOk;
}

int cmd_cohomology(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  cgc::Json j;
  stamp(j, opts, "cohomology");
  cgc::Json rows = cgc::Json::array();
  for (const auto& G : groups) {
    auto space = cgc::DisjointUnionSpace::from_group(G);
    cgc::CochainContext ctx(space, cgc::ModuleRep::natural(space));
    cgc::Json row;
    row["label"] = G->label();
    row["size"] = space->total();
    row["h1_dim"] = cgc::h1_dim(ctx);
    rows.push_back(std::move(row));
  }
  j["spaces"] = std::move(rows);
  emit(opts, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_union(const CommonOpts& opts) {
  auto groups = resolve_groups(opts);
  double nu = cgc::union_gap(groups);
  cgc::Json j;
  stamp(j, opts, "union");
  j["blocks"] = groups.size();
  j["nu"] = std::isfinite(nu) ? cgc::Json(cgc::rounded_double(nu))
                              : cgc::Json("inf");
  emit(opts, j.dump(2) + "\n");
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--catalog", opts.catalog,
                  "builtin family (cyclic, sl2) or JSON catalog path");
  cmd->add_option("--m", opts.m, "cyclic order");
  cmd->add_option("--p", opts.p, "sl2 prime");
  cmd->add_option("--range", opts.range, "index range lo..hi");
  cmd->add_option("--radius", opts.radius, "ball radius R");
  cmd->add_option("--epsilon", opts.epsilon, "SOS relaxation epsilon");
  cmd->add_option("--tol", opts.tol, "numeric tolerance");
  cmd->add_option("--jobs", opts.jobs, "worker threads for family runs");
  cmd->add_option("--seed", opts.seed, "RNG seed, recorded in outputs");
  cmd->add_option("--out", opts.out, "output file (default stdout)");
  cmd->add_option("--format", opts.format, "csv or json");
  cmd->add_flag("--json-errors", opts.json_errors,
                "report errors as JSON on stderr");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse geometry of sequences of finite marked groups"};
  app.require_subcommand(1);

  CommonOpts opts;
  int roe_count = 4;
  std::vector<std::string> relator_files;

  CLI::App* gap = app.add_subcommand("gap", "spectral gap of one group");
  CLI::App* family = app.add_subcommand("family", "per-index gaps and verdict");
  CLI::App* converge = app.add_subcommand("converge", "Cayley-topology stabilization");
  CLI::App* partition = app.add_subcommand("partition", "partition by quotient class");
  CLI::App* sos = app.add_subcommand("sos-certify", "certified gap with SOS witness");
  CLI::App* roe = app.add_subcommand("roe-avg", "Roe-algebra SOS averaging round trip");
  CLI::App* cohomology = app.add_subcommand("cohomology", "finite-scale H1 sweep");
  CLI::App* union_cmd = app.add_subcommand("union", "gap of a disjoint union");
  for (CLI::App* cmd :
       {gap, family, converge, partition, sos, roe, cohomology, union_cmd})
    add_common(cmd, opts);
  partition->add_option("--relators", relator_files, "relator files, one set each");
  roe->add_option("--count", roe_count, "number of random inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gap->parsed()) return cmd_gap(opts);
    if (family->parsed()) return cmd_family(opts);
    if (converge->parsed()) return cmd_converge(opts);
    if (partition->parsed()) return cmd_partition(opts, relator_files);
    if (sos->parsed()) return cmd_sos_certify(opts);
    if (roe->parsed()) return cmd_roe_avg(opts, roe_count);
    if (cohomology->parsed()) return cmd_cohomology(opts);
    if (union_cmd->parsed()) return cmd_union(opts);
  } catch (const cgc::Error& e) {
    if (opts.json_errors) {
      cgc::Json err;
      err["error"] = e.what();
      std::cerr << err.dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kExitComputation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitUsage;
}
