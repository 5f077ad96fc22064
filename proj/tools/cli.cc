// Copyright 2026 The fbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbsim/error.h"
#include "fbsim/grid.h"
#include "fbsim/io.h"
#include "fbsim/model.h"
#include "fbsim/oracle.h"
#include "fbsim/prep.h"
#include "fbsim/qpe.h"
#include "fbsim/synth.h"

namespace fbsim::cli {
namespace {

using json = nlohmann::ordered_json;
using io::cell;
constexpr double kPi = std::numbers::pi;
const std::vector<double> kFigAlphas = {0.25, 0.5, 1, 1.5, 2, 3};

// Result text goes to --out when given, else to the output stream.
struct Sink {
  std::ostream* out;
  std::string path;

  void emit(const std::string& text) const {
    if (path.empty()) {
      *out << text;
    } else {
      io::write_text(path, text);
    }
  }
};

std::string compact(const json& j) { return j.dump(); }

// Reference phase-estimation settings; flags override field by field.
qpe::PolaronConfig reference_polaron() {
  qpe::PolaronConfig c;
  c.qpe.ancillas = 8;
  c.qpe.t0 = kPi / 2;
  c.qpe.e_min = -4.0;
  c.qpe.e_max = 0.0;
  c.qpe.shots = 4096;
  return c;
}

qpe::QpeConfig phonon_qpe(std::int64_t shots, std::uint64_t seed) {
  qpe::QpeConfig c;
  c.ancillas = 6;
  c.t0 = 2 * kPi / 16;
  c.e_min = 0.0;
  c.e_max = 16.0;
  c.shots = shots;
  c.seed = seed;
  return c;
}

// Reads t, g, omega back out of a two-site Holstein model file. Anything
// that is not exactly holstein(t, g, omega, 2) is rejected.
struct HolsteinParams {
  double t = 1.0, g = 0.0, omega = 1.0;
};

HolsteinParams holstein_from_model(const HamiltonianSpec& h) {
  HolsteinParams p;
  bool have_omega = false;
  for (const Term& term : h.terms) {
    if (term.kind == TermKind::kHop) p.t = -term.coeff;
    if (term.kind == TermKind::kDensX) p.g = term.coeff;
    if (term.kind == TermKind::kX2 && term.coeff > 0.0) {
      p.omega = std::sqrt(2.0 * term.coeff);
      have_omega = true;
    }
  }
  if (!have_omega || model_to_json(holstein(p.t, p.g, p.omega, 2)) != model_to_json(h)) {
    throw ConfigError("--model: only the two-site Holstein model is supported by qpe polaron");
  }
  return p;
}

std::vector<double> ed_z_truncated(const oracle::EDResult& r, std::size_t n) {
  std::vector<double> z = r.z;
  z.resize(std::max(n, z.size()), 0.0);
  return z;
}

json ed_json(double alpha, const oracle::EDResult& r, int cutoff) {
  json j;
  j["alpha"] = alpha;
  j["t"] = r.t;
  j["omega"] = r.omega;
  j["nph"] = cutoff;
  j["E0"] = r.e0();
  j["Z"] = r.z;
  return j;
}

class Driver {
 public:
  Driver(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& desc,
                 std::function<void()> body) {
    CLI::App* s = parent->add_subcommand(name, desc);
    handlers_.emplace_back(s, std::move(body));
    return s;
  }
  void add_out(CLI::App* s) { s->add_option("--out", out_path_, "output file (default stdout)"); }
  Sink sink() const { return Sink{&out_, out_path_}; }

  void add_model(CLI::App& app);
  void add_oscdiag(CLI::App& app);
  void add_synth(CLI::App& app);
  void add_prep(CLI::App& app);
  void add_qpe(CLI::App& app);
  void add_oracle(CLI::App& app);
  void add_fig(CLI::App& app);

  std::ostream& out_;
  std::ostream& err_;
  std::vector<std::pair<CLI::App*, std::function<void()>>> handlers_;
  std::string out_path_;

  // Shared option storage. Each leaf reads only what it registered.
  int sites_ = 2;
  double t_ = 1.0, omega_ = 1.0, alpha_ = 1.0;
  std::optional<double> g_;
  bool periodic_ = false;
  int nx_ = 6;
  std::vector<int> nx_list_;
  std::vector<double> alpha_list_;
  std::vector<int> nph_list_;
  double eps_ = 1e-7;
  std::string model_path_, config_path_, dump_path_, evolution_, input_, part_, out_dir_;
  double dt_ = 0.01;
  int ns_ = 3, budget_ = 2000, restarts_ = 8;
  std::optional<std::uint64_t> seed_;
  std::optional<int> ancillas_, steps_per_unit_;
  std::optional<std::int64_t> shots_;
  std::optional<double> t0_, e_min_, e_max_;
  int nph_ = 45, nph_check_ = 60;
  bool with_qpe_ = false;
  std::optional<int> qpe_nx_;
  std::optional<std::int64_t> zn_shots_;

  std::vector<double> alphas() const { return alpha_list_.empty() ? kFigAlphas : alpha_list_; }
};

void Driver::add_model(CLI::App& app) {
  CLI::App* m = app.add_subcommand("model", "build Hamiltonian files");
  m->require_subcommand(1);
  CLI::App* b = leaf(m, "build-holstein", "write a Holstein chain model", [this] {
    const double g = g_ ? *g_ : holstein_g(alpha_, omega_, t_);
    sink().emit(model_to_json(holstein(t_, g, omega_, sites_, periodic_)));
  });
  b->add_option("--sites", sites_)->check(CLI::Range(2, 64));
  b->add_option("--t", t_);
  b->add_option("--g", g_, "coupling; overrides --alpha");
  b->add_option("--alpha", alpha_);
  b->add_option("--omega", omega_);
  b->add_flag("--periodic", periodic_);
  add_out(b);
}

void Driver::add_oscdiag(CLI::App& app) {
  CLI::App* d = app.add_subcommand("oscdiag", "discrete oscillator diagnostics");
  d->require_subcommand(1);
  CLI::App* s = leaf(d, "spectrum", "eigenvalues of the grid oscillator", [this] {
    const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(nx_));
    const grid::Spectrum sp = grid::spectrum(ops);
    io::CsvTable t({"n", "E_n", "deviation"}, compact({{"command", "oscdiag spectrum"}, {"nx", nx_}}));
    for (Eigen::Index n = 0; n < sp.energies.size(); ++n) {
      t.add_row({cell(static_cast<std::int64_t>(n)), cell(sp.energies[n]),
                 cell(sp.energies[n] - (static_cast<double>(n) + 0.5))});
    }
    sink().emit(t.str());
  });
  s->add_option("--nx", nx_)->check(CLI::Range(grid::kMinQubits, 12));
  add_out(s);
  CLI::App* c = leaf(d, "commutator", "[x,p] residuals per level", [this] {
    json cfg{{"command", "oscdiag commutator"}, {"nx", nx_list_}};
    io::CsvTable t({"N_x", "n", "residual", "bound"}, compact(cfg));
    for (int nx : nx_list_) {
      const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(nx));
      const std::vector<double> r = grid::commutator_residuals(ops, grid::spectrum(ops));
      for (std::size_t n = 0; n < r.size(); ++n) {
        t.add_row({cell(ops.grid.size), cell(static_cast<std::int64_t>(n)), cell(r[n]),
                   cell(grid::error_bound(ops.grid.size, static_cast<int>(n)))});
      }
    }
    sink().emit(t.str());
  });
  c->add_option("--nx", nx_list_)->delimiter(',')->required()->check(CLI::Range(grid::kMinQubits, 10));
  add_out(c);
}

void Driver::add_synth(CLI::App& app) {
  CLI::App* s = app.add_subcommand("synth", "circuit synthesis");
  s->require_subcommand(1);
  CLI::App* r = leaf(s, "report", "gate counts of one Trotter step", [this] {
    const HamiltonianSpec h = model_from_json(io::read_text(model_path_));
    const QubitLayout l = QubitLayout::standard(h.n_orbitals, h.n_oscillators, nx_);
    const TrotterPlan plan = trotter_plan(h, dt_, 1);
    sink().emit(synth::resource_report_json(synth::resource_report(plan, l)));
    if (!dump_path_.empty()) {
      std::ostringstream os;
      synth::SynthesizedStep st = synth::synth_trotter_step(plan, l);
      dump_jsonl(st.circuit, os);
      io::write_text(dump_path_, os.str());
    }
  });
  r->add_option("--model", model_path_)->required();
  r->add_option("--nx", nx_)->check(CLI::Range(grid::kMinQubits, 10));
  r->add_option("--dt", dt_, "step length");
  r->add_option("--dump", dump_path_, "write the step circuit as JSON lines");
  add_out(r);
}

void Driver::add_prep(CLI::App& app) {
  CLI::App* p = app.add_subcommand("prep", "state preparation");
  p->require_subcommand(1);
  CLI::App* g = leaf(p, "gaussian", "optimize the variational Gaussian", [this] {
    prep::SpsaOptions o;
    o.budget = budget_;
    o.restarts = restarts_;
    const prep::VariationalSchedule s = prep::optimize_gaussian(nx_, ns_, *seed_, o);
    sink().emit(prep::schedule_to_json(s));
    err_ << "fidelity " << cell(s.fidelity) << " (seed " << s.seed << ")\n";
  });
  g->add_option("--nx", nx_)->check(CLI::Range(4, 8));
  g->add_option("--ns", ns_, "ansatz steps")->check(CLI::Range(1, 64));
  g->add_option("--seed", seed_)->required();
  g->add_option("--budget", budget_, "loss evaluations per restart")->check(CLI::Range(2, 1000000));
  g->add_option("--restarts", restarts_)->check(CLI::Range(1, 1000));
  add_out(g);
}

void Driver::add_qpe(CLI::App& app) {
  CLI::App* q = app.add_subcommand("qpe", "phase estimation runs");
  q->require_subcommand(1);
  auto polaron_config = [this] {
    qpe::PolaronConfig c = reference_polaron();
    if (!config_path_.empty()) c = qpe::PolaronConfig::from_json(io::read_text(config_path_));
    if (!model_path_.empty()) {
      const HolsteinParams p = holstein_from_model(model_from_json(io::read_text(model_path_)));
      c.t = p.t;
      c.omega = p.omega;
      c.alpha = holstein_alpha(p.g, p.omega, p.t);
    }
    c.alpha = alpha_list_.empty() ? c.alpha : alpha_list_.front();
    if (qpe_nx_) c.n_x = *qpe_nx_;
    if (ancillas_) c.qpe.ancillas = *ancillas_;
    if (steps_per_unit_) c.steps_per_unit = *steps_per_unit_;
    if (shots_) c.qpe.shots = *shots_;
    if (t0_) c.qpe.t0 = *t0_;
    if (e_min_) c.qpe.e_min = *e_min_;
    if (e_max_) c.qpe.e_max = *e_max_;
    if (seed_) {
      c.qpe.seed = *seed_;
    } else if (config_path_.empty()) {
      throw ConfigError("--seed is required (or a --config that records one)");
    }
    if (!evolution_.empty()) c.evolution = evolution_ == "exact" ? qpe::Evolution::kExact : qpe::Evolution::kTrotter;
    if (!input_.empty()) c.input = input_ == "plain" ? qpe::InputState::kPlain : qpe::InputState::kDisplaced;
    c.validate();
    return c;
  };
  auto common = [this](CLI::App* s) {
    s->add_option("--config", config_path_, "polaron config JSON");
    s->add_option("--nx", qpe_nx_)->check(CLI::Range(2, 8));
    s->add_option("--ancillas", ancillas_)->check(CLI::Range(1, 12));
    s->add_option("--steps-per-unit", steps_per_unit_)->check(CLI::Range(1, 100000));
    s->add_option("--shots", shots_)->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    s->add_option("--t0", t0_);
    s->add_option("--e-min", e_min_);
    s->add_option("--e-max", e_max_);
    s->add_option("--seed", seed_);
    s->add_option("--evolution", evolution_)->check(CLI::IsMember({"trotter", "exact"}));
    s->add_option("--input", input_)->check(CLI::IsMember({"displaced", "plain"}));
    add_out(s);
  };
  CLI::App* p = leaf(q, "polaron", "energy histogram of the Holstein dimer", [this, polaron_config] {
    const qpe::PolaronConfig c = polaron_config();
    const qpe::PolaronResult r = qpe::run_polaron(c);
    json cfg = json::parse(c.to_json());
    cfg["command"] = "qpe polaron";
    sink().emit(r.hist.to_csv(compact(cfg)));
    err_ << "modal energy " << cell(r.hist.modal_energy()) << "\n";
  });
  CLI::Option* model_opt = p->add_option("--model", model_path_, "two-site Holstein model file");
  p->add_option("--alpha", alpha_list_)->expected(1)->excludes(model_opt);
  common(p);
  CLI::App* z = leaf(q, "zn", "phonon distribution of the QPE ground state", [this, polaron_config] {
    qpe::PolaronConfig c = polaron_config();
    c.evolution = qpe::Evolution::kExact;
    const qpe::PolaronResult r = qpe::run_polaron(c);
    const QubitLayout l = QubitLayout::standard(2, 2, c.n_x);
    const qpe::QpeConfig zc = phonon_qpe(zn_shots_ ? *zn_shots_ : 10000, c.qpe.seed);
    const qpe::PhononDistribution d = qpe::phonon_distribution(r.collapsed, l, c.omega, zc);
    const oracle::EDResult ed = oracle::ed_holstein(c.t, c.g(), c.omega, 2, nph_);
    const std::vector<double> zed = ed_z_truncated(ed, d.z.size());
    json cfg = json::parse(c.to_json());
    cfg["command"] = "qpe zn";
    cfg["zn_shots"] = zc.shots;
    cfg["nph"] = nph_;
    io::CsvTable t({"n", "Z_qpe", "Z_ed"}, compact(cfg));
    for (std::size_t n = 0; n < d.z.size(); ++n) {
      t.add_row({cell(static_cast<std::int64_t>(n)), cell(d.z[n]), cell(zed[n])});
    }
    sink().emit(t.str());
  });
  z->add_option("--alpha", alpha_list_)->expected(1);
  z->add_option("--nph", nph_, "Fock cutoff of the ED reference")->check(CLI::Range(1, 80));
  z->add_option("--zn-shots", zn_shots_, "shots of the phonon-number QPE");
  common(z);
}

void Driver::add_oracle(CLI::App& app) {
  CLI::App* o = app.add_subcommand("oracle", "classical reference results");
  o->require_subcommand(1);
  CLI::App* e = leaf(o, "ed", "Fock-space ED of the Holstein dimer", [this] {
    const double alpha = alpha_list_.empty() ? 1.0 : alpha_list_.front();
    const oracle::EDResult r = oracle::ed_holstein(t_, holstein_g(alpha, omega_, t_), omega_, 2, nph_);
    sink().emit(ed_json(alpha, r, nph_).dump(2) + "\n");
  });
  e->add_option("--alpha", alpha_list_)->expected(1);
  e->add_option("--nph", nph_)->check(CLI::Range(1, 100));
  e->add_option("--t", t_);
  e->add_option("--omega", omega_);
  add_out(e);
  CLI::App* g = leaf(o, "golden", "regenerate the golden ED files", [this] {
    std::filesystem::create_directories(out_dir_);
    for (double alpha : alphas()) {
      const double g = holstein_g(alpha, 1.0, 1.0);
      const oracle::EDResult r = oracle::ed_holstein(1.0, g, 1.0, 2, nph_);
      const oracle::EDResult c = oracle::ed_holstein(1.0, g, 1.0, 2, nph_check_);
      json j = ed_json(alpha, r, nph_);
      j["nph_check"] = nph_check_;
      j["E0_check"] = c.e0();
      j["delta"] = std::abs(c.e0() - r.e0());
      std::ostringstream name;
      name << "holstein_alpha_" << cell(alpha) << ".json";
      io::write_text((std::filesystem::path(out_dir_) / name.str()).string(), j.dump(2) + "\n");
    }
  });
  g->add_option("--alpha", alpha_list_)->delimiter(',');
  g->add_option("--nph", nph_);
  g->add_option("--nph-check", nph_check_);
  g->add_option("--out-dir", out_dir_)->required();
}

void Driver::add_fig(CLI::App& app) {
  CLI::App* f = app.add_subcommand("fig", "figure data as CSV");
  f->require_subcommand(1);
  CLI::App* f1 = leaf(f, "fig1", "grid spectrum and overlaps with sampled levels", [this] {
    const grid::GridSpec gs = grid::make_grid(nx_);
    const grid::DiscreteOperators ops = grid::build_operators(gs);
    const grid::Spectrum sp = grid::spectrum(ops);
    const int n_max = static_cast<int>(std::min<std::int64_t>(gs.size - 1, grid::kMaxHermiteOrder));
    const grid::SampledBasis b = grid::sample_basis(gs, n_max);
    io::CsvTable t({"n", "E_n", "deviation", "overlap"}, compact({{"command", "fig fig1"}, {"nx", nx_}}));
    for (int n = 0; n <= n_max; ++n) {
      const double ov = std::abs(sp.vectors.col(n).dot(b.chi.col(n).cast<cplx>()));
      t.add_row({cell(n), cell(sp.energies[n]), cell(sp.energies[n] - (n + 0.5)), cell(ov)});
    }
    sink().emit(t.str());
  });
  f1->add_option("--nx", nx_)->check(CLI::Range(grid::kMinQubits, 10));
  add_out(f1);
  CLI::App* f2 = leaf(f, "fig2", "commutator residual vs level", [this] {
    io::CsvTable t({"N_x", "n", "residual", "bound"},
                   compact({{"command", "fig fig2"}, {"nx", nx_list_}}));
    for (int nx : nx_list_) {
      const grid::DiscreteOperators ops = grid::build_operators(grid::make_grid(nx));
      const std::vector<double> r = grid::commutator_residuals(ops, grid::spectrum(ops));
      for (std::size_t n = 0; n < r.size(); ++n) {
        t.add_row({cell(ops.grid.size), cell(static_cast<std::int64_t>(n)), cell(r[n]),
                   cell(grid::error_bound(ops.grid.size, static_cast<int>(n)))});
      }
    }
    sink().emit(t.str());
  });
  f2->add_option("--nx", nx_list_)->delimiter(',')->required()->check(CLI::Range(grid::kMinQubits, 10));
  add_out(f2);
  CLI::App* f3 = leaf(f, "fig3", "grid size and half-width needed per cutoff", [this] {
    if (nph_list_.empty()) nph_list_ = {2, 4, 8, 16, 24, 32, 48, 64};
    io::CsvTable t({"n_ph", "nx_bound", "nx_empirical", "L_bound", "L_empirical"},
                   compact({{"command", "fig fig3"}, {"nph", nph_list_}, {"eps", eps_}}));
    auto half_width = [](std::int64_t n) {
      return n > 0 ? std::sqrt(2.0 * kPi * static_cast<double>(n)) / 2.0 : 0.0;
    };
    for (int n : nph_list_) {
      const std::int64_t nb = grid::min_grid_for_cutoff(n);
      const std::int64_t ne = grid::min_grid_empirical(n, eps_);
      t.add_row({cell(n), cell(nb), cell(ne), cell(half_width(nb)), cell(half_width(ne))});
    }
    sink().emit(t.str());
  });
  f3->add_option("--nph", nph_list_)->delimiter(',');
  f3->add_option("--eps", eps_);
  add_out(f3);
  CLI::App* f9 = leaf(f, "fig9", "polaron energy and phonon weights vs coupling", [this] {
    json cfg{{"command", "fig fig9"}, {"part", part_ == "zn" ? "zn" : "energy"}, {"alpha", alphas()}, {"nph", nph_}};
    if (part_ == "zn") {
      io::CsvTable t({"alpha", "n", "Z"}, compact(cfg));
      for (double a : alphas()) {
        const oracle::EDResult r = oracle::ed_holstein(1.0, holstein_g(a, 1.0, 1.0), 1.0, 2, nph_);
        for (std::size_t n = 0; n < r.z.size(); ++n) {
          t.add_row({cell(a), cell(static_cast<std::int64_t>(n)), cell(r.z[n])});
        }
      }
      sink().emit(t.str());
      return;
    }
    std::vector<std::string> cols = {"alpha", "E0", "Z0"};
    if (with_qpe_) {
      if (!seed_) throw ConfigError("--seed is required with --qpe");
      cfg["qpe"] = json::parse(reference_polaron().to_json())["qpe"];
      cfg["nx"] = nx_;
      cfg["seed"] = *seed_;
      cols.push_back("E0_qpe");
    }
    io::CsvTable t(cols, compact(cfg));
    for (double a : alphas()) {
      const oracle::EDResult r = oracle::ed_holstein(1.0, holstein_g(a, 1.0, 1.0), 1.0, 2, nph_);
      std::vector<std::string> row = {cell(a), cell(r.e0()), cell(r.z0())};
      if (with_qpe_) {
        qpe::PolaronConfig c = reference_polaron();
        c.alpha = a;
        c.n_x = nx_;
        c.evolution = qpe::Evolution::kExact;
        c.qpe.seed = *seed_;
        row.push_back(cell(qpe::run_polaron(c).hist.modal_energy()));
      }
      t.add_row(row);
    }
    sink().emit(t.str());
  });
  f9->add_option("--alpha", alpha_list_)->delimiter(',');
  f9->add_option("--nph", nph_)->check(CLI::Range(1, 80));
  f9->add_option("--part", part_)->check(CLI::IsMember({"energy", "zn"}));
  f9->add_flag("--qpe", with_qpe_, "add dense-exact QPE energies on the grid");
  f9->add_option("--nx", nx_)->check(CLI::Range(2, 6));
  f9->add_option("--seed", seed_);
  add_out(f9);
}

int Driver::run(const std::vector<std::string>& args) {
  CLI::App app("Fermion-boson simulation toolkit", "fbsim");
  app.require_subcommand(1);
  add_model(app);
  add_oscdiag(app);
  add_synth(app);
  add_prep(app);
  add_qpe(app);
  add_oracle(app);
  add_fig(app);

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_, err_);
    if (code == 0) return kExitOk;
    err_ << app.help();
    return kExitConfig;
  }
  try {
    for (auto& [sub, body] : handlers_) {
      if (sub->parsed()) {
        body();
        return kExitOk;
      }
    }
    err_ << "no command given\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericError& e) {
    err_ << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err_ << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Driver d(out, err);
  return d.run(args);
}

}  // namespace fbsim::cli
