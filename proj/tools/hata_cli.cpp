// hata: command-line front end for the Hata set harmonic/spectral library.
//
//   hata dimension --h 2
//   hata harmonic  --boundary 0,0,1 --h 3 --m 10 --out results/
//   hata eigen     --h 1.5 --m 10 --count 20
//   hata theta     --h 3 --m 10 --eigen-index 1
//   hata mesh      --m 5
//
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
// 4 I/O failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hata/hata.hpp"
#include "hata/io.hpp"

namespace {

using hata::io::Format;
using hata::io::RunConfig;

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Options {
  double alpha_re = hata::IfsParams::default_alpha().real();
  double alpha_im = hata::IfsParams::default_alpha().imag();
  double h = 2.0;
  int m = 10;
  std::vector<double> boundary;
  std::size_t count = 20;
  std::size_t eigen_index = 0;
  std::string out;
  std::string format;
  bool write_vectors = false;
  bool all_levels = false;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->set_help_flag("--help", "Print this help message and exit");
  cmd->add_option("--alpha-re", o.alpha_re, "Real part of alpha");
  cmd->add_option("--alpha-im", o.alpha_im, "Imaginary part of alpha");
  cmd->add_option("--h", o.h, "Harmonic structure parameter (> 1)");
  cmd->add_option("--m", o.m, "Level of the approximation");
  cmd->add_option("--out", o.out, "Output directory (default $HATA_OUT_DIR or .)");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

RunConfig to_config(const Options& o) {
  RunConfig c;
  c.alpha = {o.alpha_re, o.alpha_im};
  c.h = o.h;
  c.m = o.m;
  if (!o.boundary.empty()) {
    if (o.boundary.size() != 3) throw hata::ConfigError("--boundary takes three values a,b,c");
    c.boundary = {o.boundary[0], o.boundary[1], o.boundary[2]};
  }
  c.eigen_count = o.count;
  if (o.eigen_index > 0) c.eigen_index = o.eigen_index;
  if (!o.format.empty()) c.format = o.format == "json" ? Format::json : Format::csv;
  if (!o.out.empty())
    c.out_dir = o.out;
  else if (const char* env = std::getenv("HATA_OUT_DIR"); env && *env)
    c.out_dir = env;
  c.validate();
  return c;
}

void note_written(const std::filesystem::path& p) { std::cout << "wrote " << p.string() << '\n'; }

int cmd_dimension(const RunConfig& c) {
  const hata::IfsParams p(c.alpha);
  const double d = hata::resistance_dimension(c.h);
  const double de = hata::euclidean_dimension(p);
  std::cout << std::setprecision(12);
  std::cout << "resistance_dimension " << d << '\n';
  std::cout << "euclidean_dimension " << de << '\n';
  std::cout << "coincidence_h " << 1.0 / p.ratio1() << '\n';
  return kOk;
}

int cmd_harmonic(const RunConfig& c) {
  const hata::IfsParams p(c.alpha);
  const hata::HarmonicStructure s(c.h);
  const auto g = hata::build_graph(c.m, p, c.h);
  const auto u = hata::harmonic_from_boundary(c.boundary, c.m, s);
  const auto trace = hata::restrict_to_interval(u, g);
  const auto mono = hata::monotonicity_check(trace);
  const auto theta = hata::theta_analysis(trace, u, c.h, 1);
  const auto H = hata::assemble_laplacian(g);

  const Format f = c.format.value_or(Format::csv);
  const std::string echo = hata::io::config_echo(c);
  note_written(hata::io::write_table(c.out_dir, "harmonic_function", f, echo, hata::io::vertex_function_table(u, g)));
  note_written(hata::io::write_table(c.out_dir, "harmonic_trace", f, echo, hata::io::trace_table(trace)));

  std::cout << std::setprecision(12);
  std::cout << "harmonic_residual " << hata::check_harmonicity(u, H) << '\n';
  std::cout << "trace_points " << trace.points.size() << '\n';
  std::cout << "nondecreasing " << (mono.nondecreasing ? "true" : "false");
  if (mono.first_violation) std::cout << " first_violation_x " << trace.points[*mono.first_violation].x;
  std::cout << '\n';
  std::cout << "theta_reference " << theta.reference << " max_deviation " << theta.max_deviation << " excluded "
            << theta.excluded_count << '\n';
  return kOk;
}

hata::SpectralResult full_solve(const RunConfig& c, int level, std::size_t count, const hata::HarmonicStructure& s,
                                hata::VertexGraph& g_out, hata::MeasureWeights& w_out) {
  g_out = hata::build_graph(level, hata::IfsParams(c.alpha), c.h);
  const auto H = hata::assemble_laplacian(g_out);
  w_out = hata::make_measure(g_out, s);
  auto r = hata::solve_dirichlet(g_out, H, w_out, count);
  hata::classify_support(r);
  hata::pair_spectrum(r, s, w_out);
  return r;
}

int cmd_eigen(const RunConfig& c, bool write_vectors) {
  const hata::HarmonicStructure s(c.h);
  hata::VertexGraph g;
  hata::MeasureWeights w;
  const auto r = full_solve(c, c.m, c.eigen_count, s, g, w);
  const Format f = c.format.value_or(Format::csv);
  const std::string echo = hata::io::config_echo(c);
  const auto table = hata::io::eigen_table(r);
  note_written(hata::io::write_table(c.out_dir, "eigenvalues", f, echo, table));
  if (write_vectors) {
    for (std::size_t k = 0; k < r.size(); ++k)
      note_written(hata::io::write_table(c.out_dir, "eigenvector_" + std::to_string(k + 1), f, echo,
                                         hata::io::vertex_function_table(r.eigenfunction(k), g, k + 1)));
  }
  hata::io::write_csv(std::cout, echo, table);
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r.clustered[k]) std::cout << "note: eigenvalue " << k + 1 << " lies in a cluster\n";
  return kOk;
}

int cmd_theta(const RunConfig& c, bool all_levels) {
  if (c.m < 2) throw hata::ConfigError("theta needs m >= 2");
  const hata::HarmonicStructure s(c.h);
  const Format f = c.format.value_or(Format::csv);
  std::cout << std::setprecision(12);
  for (int level : {c.m - 1, c.m}) {
    RunConfig lc = c;
    lc.m = level;
    hata::VertexGraph g;
    hata::VertexFunction u;
    if (c.eigen_index) {
      hata::MeasureWeights w;
      const auto r = full_solve(c, level, *c.eigen_index, s, g, w);
      u = r.eigenfunction(*c.eigen_index - 1);
      std::cout << "level " << level << " lambda " << r.eigenvalues.back() << " label "
                << hata::to_string(r.labels.back()) << '\n';
    } else {
      g = hata::build_graph(level, hata::IfsParams(c.alpha), c.h);
      u = hata::harmonic_from_boundary(c.boundary, level, s);
    }
    const auto trace = hata::restrict_to_interval(u, g);
    const auto report = hata::theta_analysis(trace, u, c.h, all_levels ? std::optional<int>(1) : std::nullopt);
    note_written(hata::io::write_table(c.out_dir, "theta_m" + std::to_string(level), f, hata::io::config_echo(lc),
                                       hata::io::theta_table(report)));
    std::cout << "level " << level << " theta_reference " << report.reference << " max_deviation "
              << report.max_deviation << " points " << report.entries.size() << " excluded "
              << report.excluded_count << '\n';
  }
  return kOk;
}

int cmd_mesh(const RunConfig& c) {
  const auto g = hata::build_graph(c.m, hata::IfsParams(c.alpha), c.h);
  const Format f = c.format.value_or(Format::json);
  if (f == Format::json) {
    const auto path = c.out_dir / "mesh.json";
    hata::io::write_file(path, hata::io::mesh_json(g).dump(1) + "\n");
    note_written(path);
    return kOk;
  }
  const std::string echo = hata::io::config_echo(c);
  hata::io::Table vt;
  vt.columns = {"id", "address", "x", "y", "boundary", "on01", "birth_level"};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& v = g.vertices[i];
    vt.rows.push_back({std::to_string(i), v.address.to_string(), hata::io::format_double(v.z.real()),
                       hata::io::format_double(v.z.imag()), v.boundary ? "true" : "false",
                       v.on_unit_interval ? "true" : "false", std::to_string(v.birth_level)});
  }
  hata::io::Table et;
  et.columns = {"u", "v", "conductance"};
  for (const auto& e : g.edges)
    et.rows.push_back({std::to_string(e.u), std::to_string(e.v), hata::io::format_double(e.conductance)});
  note_written(hata::io::write_table(c.out_dir, "mesh_vertices", f, echo, vt));
  note_written(hata::io::write_table(c.out_dir, "mesh_edges", f, echo, et));
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic functions and Dirichlet spectra on the Hata tree set"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto* dim = app.add_subcommand("dimension", "Resistance and Euclidean dimensions");
  add_common(dim, o);

  auto* harm = app.add_subcommand("harmonic", "Harmonic function from boundary data, with its trace on [0,1]");
  add_common(harm, o);
  harm->add_option("--boundary", o.boundary, "Boundary values u(alpha),u(0),u(1)")->delimiter(',')->expected(3);

  auto* eig = app.add_subcommand("eigen", "Dirichlet eigenvalues with primary/derived labels");
  add_common(eig, o);
  eig->add_option("--count", o.count, "Number of eigenvalues");
  eig->add_flag("--write-vectors", o.write_vectors, "Also write one CSV per eigenvector");

  auto* theta = app.add_subcommand("theta", "Middle-point proportions on [0,1] at levels m-1 and m");
  add_common(theta, o);
  theta->add_option("--eigen-index", o.eigen_index, "1-based eigenfunction index");
  theta->add_option("--boundary", o.boundary, "Use the harmonic function with these boundary values")
      ->delimiter(',')
      ->expected(3);
  theta->add_flag("--all-levels", o.all_levels, "Report middle points of every level, not only the finest");

  auto* mesh = app.add_subcommand("mesh", "Export the level-m vertex graph");
  add_common(mesh, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    const RunConfig c = to_config(o);
    if (*dim) return cmd_dimension(c);
    if (*harm) return cmd_harmonic(c);
    if (*eig) return cmd_eigen(c, o.write_vectors);
    if (*theta) {
      if (!c.eigen_index && o.boundary.empty())
        throw hata::ConfigError("theta needs --eigen-index or --boundary");
      return cmd_theta(c, o.all_levels);
    }
    return cmd_mesh(c);
  } catch (const hata::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const hata::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const hata::IoError& e) {
    std::cerr << "i/o failure: " << e.what() << '\n';
    return kIo;
  }
}
