// Copyright 2026 The Zeitgeist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Environments and models are opaque handles; results come
// back as plain dicts and lists keyed by strategy and situation labels.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zeitgeist/config_io.hpp"
#include "zeitgeist/games_catalog.hpp"
#include "zeitgeist/inference.hpp"
#include "zeitgeist/learning_sim.hpp"
#include "zeitgeist/stability.hpp"

namespace py = pybind11;
using namespace zeitgeist;

namespace {

py::list belief_list(const Belief& mu, const Model& m, const StageEnv& env) {
  py::list out;
  for (const auto& [k, w] : mu) {
    const Parameter p = m.parameter(k);
    out.append(py::dict(py::arg("index") = k, py::arg("conj_a") = env.strategies()[p.conj_a],
                        py::arg("conj_b") = env.strategies()[p.conj_b], py::arg("kernel") = p.kernel,
                        py::arg("weight") = w));
  }
  return out;
}

py::tuple play_labels(const Quadruple& q, const StageEnv& env) {
  const auto& s = env.strategies();
  return py::make_tuple(s[q.aa], s[q.ab], s[q.ba], s[q.bb]);
}

py::dict situation_record(const SituationEz& e, Shares sh, const StageEnv& env, const Model& a, const Model& b) {
  const Fitness f = situation_fitness(e, sh, env);
  return py::dict(py::arg("situation") = env.situations()[e.situation], py::arg("play") = play_labels(e.play, env),
                  py::arg("belief_a") = belief_list(e.belief_a, a, env),
                  py::arg("belief_b") = belief_list(e.belief_b, b, env), py::arg("fitness_a") = f.a,
                  py::arg("fitness_b") = f.b, py::arg("mixture_supported") = e.mixture_supported);
}

// Per situation, the list of situation EZs; the EZ set is their product.
py::list solve(const StageEnv& env, const Model& a, const Model& b, double pa, double pb) {
  const Shares sh = Shares::make(pa, pb);
  const EzSolutions sol = solve_ez(env, a, b, sh);
  py::list out;
  for (const auto& per : sol.per_situation) {
    py::list records;
    for (const SituationEz& e : per) records.append(situation_record(e, sh, env, a, b));
    out.append(records);
  }
  return out;
}

py::dict stability_dict(const StabilityVerdict& v) {
  py::list evidence;
  for (const EpsEvidence& e : v.evidence)
    evidence.append(py::dict(py::arg("eps") = e.eps, py::arg("ez_count") = e.ez_count,
                             py::arg("min_gap") = e.min_gap, py::arg("max_gap") = e.max_gap));
  return py::dict(py::arg("classification") = std::string(to_string(v.classification)),
                  py::arg("evidence") = evidence);
}

py::dict learning(const StageEnv& env, const Model& a, const Model& b, const std::string& sim_json,
                  Index window, double tol) {
  const SimConfig cfg = parse_sim_config(sim_json, "<sim>");
  LearningTrajectory traj;
  {
    py::gil_scoped_release release;
    traj = run_learning(env, a, b, cfg);
  }
  const auto ez = enumerate_ez(env, a, b, cfg.shares);
  const EzComparison c = compare_to_ez(traj, ez, std::min(window, std::max<Index>(traj.periods(), 1)), tol);
  py::list payoff_a, payoff_b;
  for (Index t = 0; t < traj.periods(); ++t) {
    payoff_a.append(traj.mean_payoff(t, Group::A));
    payoff_b.append(traj.mean_payoff(t, Group::B));
  }
  return py::dict(py::arg("periods") = traj.periods(), py::arg("converged") = c.converged,
                  py::arg("modal_play") = traj.periods() ? py::object(play_labels(c.modal_play, env)) : py::none(),
                  py::arg("belief_distance") = c.belief_distance, py::arg("play_mismatch") = c.play_mismatch,
                  py::arg("mean_payoff") = py::make_tuple(c.mean_payoff[0], c.mean_payoff[1]),
                  py::arg("payoff_se") = py::make_tuple(c.payoff_se[0], c.payoff_se[1]),
                  py::arg("final_belief_b") = traj.periods() ? py::cast(std::vector<double>(
                                                                   traj.belief(traj.periods() - 1, Group::B).begin(),
                                                                   traj.belief(traj.periods() - 1, Group::B).end()))
                                                             : py::list(),
                  py::arg("payoff_a") = payoff_a, py::arg("payoff_b") = payoff_b, py::arg("note") = c.note);
}

}  // namespace

PYBIND11_MODULE(_zeitgeist, m) {
  m.doc() = "Equilibrium zeitgeists: solver, stability analysis and learning simulation.";
  m.attr("__version__") = ZEITGEIST_VERSION;

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);

  py::class_<StageEnv>(m, "StageEnv")
      .def_property_readonly("strategies", &StageEnv::strategies)
      .def_property_readonly("situations", &StageEnv::situations)
      .def_property_readonly("consequences", &StageEnv::consequences)
      .def("to_json", &env_to_json)
      .def("payoff", [](const StageEnv& env, const std::string& situation, const std::string& own,
                        const std::string& opp) {
        for (Index s = 0; s < env.num_situations(); ++s)
          if (env.situations()[s] == situation) return expected_payoff(env, situation, own, opp, env.kernel(s));
        throw InputError("unknown situation '" + situation + "'");
      });

  py::class_<Model>(m, "Model")
      .def_property_readonly("label", &Model::label)
      .def_property_readonly("size", &Model::size)
      .def_property_readonly("num_kernels", [](const Model& mo) { return mo.kernels().size(); })
      .def("to_json", [](const Model& mo, const StageEnv& env) { return model_to_json(mo, env); });

  m.def("parse_env", [](const std::string& text) {
    ConfigContext ctx;
    return parse_env(text, "<env>", ctx);
  });
  m.def("load_env", [](const std::string& path) {
    ConfigContext ctx;
    return load_env(path, ctx);
  });
  m.def("parse_model", [](const std::string& text, const StageEnv& env) {
    ConfigContext ctx;
    return parse_model(text, "<model>", env, ctx);
  });

  m.def("example1", &build_example1, "The three-strategy, two-situation example.");
  m.def("investment_game", [](double b, double c, double mm) {
        const InvestmentGame g = build_investment_game({b, c, mm});
        return py::dict(py::arg("env") = g.env, py::arg("model_a") = g.model_a, py::arg("model_b") = g.model_b,
                        py::arg("b_grid") = g.b_grid);
      },
      py::arg("b") = 1.0, py::arg("c") = 5.5, py::arg("m") = 12.0);
  m.def("minimal_correct_model", &minimal_correct_model);
  m.def("illusion_of_control_model", &illusion_of_control_model, py::arg("env"), py::arg("perturb_eps"));

  m.def("kl_divergence", [](const std::vector<double>& p, const std::vector<double>& q) {
    return static_cast<double>(kl_divergence(p, q));
  });
  m.def("symmetric_nash", [](const StageEnv& env, Index s) {
    const SymmetricNash r = symmetric_nash(env, s);
    std::vector<std::string> labels;
    for (Index a : r.strategies) labels.push_back(env.strategies()[a]);
    return py::dict(py::arg("strategies") = labels, py::arg("v_ne") = r.v_ne, py::arg("exists") = r.exists);
  });
  m.def("stackelberg", [](const StageEnv& env, Index s) {
    const Stackelberg r = stackelberg(env, s);
    return py::make_tuple(env.strategies()[r.strategy], r.v_bar);
  });

  m.def("solve_ez", &solve, py::arg("env"), py::arg("model_a"), py::arg("model_b"), py::arg("p_a"), py::arg("p_b"),
        "Situation EZs per situation at shares (p_a, p_b).");
  m.def("classify_stability",
        [](const StageEnv& env, const Model& a, const Model& b, const std::vector<double>& q,
           const std::vector<double>& eps) {
          return stability_dict(classify_stability(env, a, b, FitnessWeights(q), eps));
        },
        py::arg("env"), py::arg("resident"), py::arg("entrant"), py::arg("q"), py::arg("eps_list") = default_eps_list());
  m.def("detect_reversal", [](const StageEnv& env, const Model& a, const Model& b) {
    const ReversalResult r = detect_reversal(env, a, b);
    return py::dict(py::arg("reversal") = r.reversal, py::arg("reason") = r.reason);
  });

  m.def("cournot", [](double beta, double c, double r, double r_hat) {
        const CournotReport rep = cournot_closed_form({beta, c, r, r_hat});
        return py::dict(py::arg("a_AA") = rep.a_aa, py::arg("resident_fitness") = rep.resident_fitness,
                        py::arg("a_stack") = rep.a_stack, py::arg("a_BA") = rep.a_ba,
                        py::arg("entrant_fitness") = rep.entrant_fitness);
      },
      py::arg("beta") = 10.0, py::arg("c") = 2.0, py::arg("r") = 1.0, py::arg("r_hat") = 0.5);
  m.def("centipede", [](Index K, double g, double l) {
        const CentipedeReport rep = centipede_analysis({K, g, l});
        return py::dict(py::arg("applicable") = rep.applicable,
                        py::arg("maximal_continuation_verified") = rep.maximal_continuation_verified,
                        py::arg("analogy_minimizer_x") = rep.analogy_minimizer_x, py::arg("p_star_a") = rep.p_star_a,
                        py::arg("p_star_b") = rep.p_star_b);
      },
      py::arg("K") = 10, py::arg("g") = 1.0, py::arg("l") = 2.0);
  m.def("dollar", [](Index K) {
    const DollarReport rep = dollar_analysis(K);
    return py::dict(py::arg("dominance") = rep.dominance,
                    py::arg("maximal_continuation_verified") = rep.maximal_continuation_verified);
  });

  m.def("run_learning", &learning, py::arg("env"), py::arg("model_a"), py::arg("model_b"), py::arg("sim_json"),
        py::arg("window") = 500, py::arg("tol") = 0.05,
        "Runs the simulation described by a sim config JSON string and compares it with the EZ set.");
}
