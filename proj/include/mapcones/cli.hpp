#pragma once

// Command-line front end.  Exit codes: 0 member/success, 1 non-member,
// 2 unknown / solver budget exhausted, 3 malformed input, 4 dimension
// mismatch, 5 other errors.

#include "mapcones/harness.hpp"
#include "mapcones/io.hpp"
#include "mapcones/paper_fixtures.hpp"
#include "mapcones/pptsquare.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

namespace mapcones::cli {

struct CommonFlags {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 64;
  int max_iter = 0;
  int threads = 1;
  bool as_json = false;

  SolverOptions options() const {
    SolverOptions o;
    o.tol = tol;
    o.seed = seed;
    o.restarts = restarts;
    o.max_iter = max_iter;
    o.threads = threads;
    return o;
  }
};

inline void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--tol", f.tol, "numerical tolerance");
  cmd->add_option("--seed", f.seed, "RNG seed; fixes all stochastic output");
  cmd->add_option("--restarts", f.restarts, "seesaw restart count");
  cmd->add_option("--max-iter", f.max_iter, "iteration cap (0 = solver default)");
  cmd->add_option("--threads", f.threads, "solver threads (default 1, reproducible)");
  cmd->add_flag("--json", f.as_json, "machine-readable output");
}

inline int emit_verdict(const MembershipVerdict& v, const CommonFlags& f, std::ostream& out) {
  if (f.as_json) {
    out << to_json(v).dump(2) << "\n";
  } else {
    out << to_string(v.status) << "  gap=" << std::setprecision(12) << v.gap;
    if (!v.meta.empty()) out << "  [" << v.meta << "]";
    out << "\n";
  }
  return v.exit_code();
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Choi-matrix calculus and cone membership for Hermitian-preserving maps"};
  app.require_subcommand(1);
  std::function<int()> action;

  // --- pair ---------------------------------------------------------------
  auto* c_pair = app.add_subcommand("pair", "bilinear pairing of two matrices or maps");
  auto pair_flags = std::make_shared<CommonFlags>();
  auto pair_args = std::make_shared<std::vector<std::string>>();
  c_pair->add_option("operands", *pair_args, "two maps (builtin or file) or two matrix files")
      ->expected(2);
  add_common(c_pair, *pair_flags);
  c_pair->callback([&action, pair_flags, pair_args, &out]() {
    action = [pair_flags, pair_args, &out]() {
      double value;
      try {
        HPMap a = resolve_map((*pair_args)[0]);
        HPMap b = resolve_map((*pair_args)[1]);
        value = map_pairing(a, b);
      } catch (const ParseError&) {
        BipartiteMatrix a = resolve_matrix((*pair_args)[0]);
        BipartiteMatrix b = resolve_matrix((*pair_args)[1]);
        value = pairing(a, b);
      }
      if (pair_flags->as_json)
        out << json{{"value", value}}.dump() << "\n";
      else
        out << std::setprecision(15) << value << "\n";
      return 0;
    };
  });

  // --- apply --------------------------------------------------------------
  auto* c_apply = app.add_subcommand("apply", "apply a map to a matrix");
  auto apply_flags = std::make_shared<CommonFlags>();
  auto apply_args = std::make_shared<std::vector<std::string>>();
  c_apply->add_option("operands", *apply_args, "MAP MATRIX-FILE")->expected(2);
  add_common(c_apply, *apply_flags);
  c_apply->callback([&action, apply_args, &out]() {
    action = [apply_args, &out]() {
      HPMap m = resolve_map((*apply_args)[0]);
      BipartiteMatrix a = resolve_matrix((*apply_args)[1]);
      Matrix res = mapcones::apply(m, a.mat());
      json j = matrix_entries_json(res);
      j["dims"] = json::array({m.dimB()});
      out << j.dump(2) << "\n";
      return 0;
    };
  });

  // --- adjoint ------------------------------------------------------------
  auto* c_adj = app.add_subcommand("adjoint", "adjoint map under the pairing");
  auto adj_arg = std::make_shared<std::string>();
  c_adj->add_option("map", *adj_arg, "map (builtin or file)")->required();
  c_adj->callback([&action, adj_arg, &out]() {
    action = [adj_arg, &out]() {
      out << to_json(adjoint(resolve_map(*adj_arg))).dump(2) << "\n";
      return 0;
    };
  });

  // --- compose ------------------------------------------------------------
  auto* c_comp = app.add_subcommand("compose", "composition psi o phi (first arg acts last)");
  auto comp_args = std::make_shared<std::vector<std::string>>();
  c_comp->add_option("operands", *comp_args, "PSI PHI")->expected(2);
  c_comp->callback([&action, comp_args, &out]() {
    action = [comp_args, &out]() {
      HPMap psi = resolve_map((*comp_args)[0]);
      HPMap phi = resolve_map((*comp_args)[1]);
      out << to_json(compose(psi, phi)).dump(2) << "\n";
      return 0;
    };
  });

  // --- pt / flip ----------------------------------------------------------
  auto* c_pt = app.add_subcommand("pt", "partial transpose of a bipartite matrix");
  auto pt_arg = std::make_shared<std::string>();
  c_pt->add_option("matrix", *pt_arg, "matrix file")->required();
  c_pt->callback([&action, pt_arg, &out]() {
    action = [pt_arg, &out]() {
      out << to_json(partial_transpose(resolve_matrix(*pt_arg))).dump(2) << "\n";
      return 0;
    };
  });
  auto* c_flip = app.add_subcommand("flip", "factor exchange of a bipartite matrix");
  auto flip_arg = std::make_shared<std::string>();
  c_flip->add_option("matrix", *flip_arg, "matrix file")->required();
  c_flip->callback([&action, flip_arg, &out]() {
    action = [flip_arg, &out]() {
      out << to_json(flip(resolve_matrix(*flip_arg))).dump(2) << "\n";
      return 0;
    };
  });

  // --- member -------------------------------------------------------------
  auto* c_mem = app.add_subcommand("member", "membership in a builtin cone");
  auto mem_flags = std::make_shared<CommonFlags>();
  auto mem_cone = std::make_shared<std::string>();
  auto mem_map = std::make_shared<std::string>();
  c_mem->add_option("--cone", *mem_cone, "cp|ccp|ppt|dec|p:k|sp:k")->required();
  c_mem->add_option("map", *mem_map, "map (builtin or file)")->required();
  add_common(c_mem, *mem_flags);
  c_mem->callback([&action, mem_flags, mem_cone, mem_map, &out]() {
    action = [mem_flags, mem_cone, mem_map, &out]() {
      ConeSpec spec = resolve_cone(*mem_cone);
      if (spec.kind != ConeSpec::Kind::Builtin)
        throw ParseError("member: --cone must be a builtin cone");
      HPMap m = resolve_map(*mem_map);
      return emit_verdict(member_of(spec.id, m, mem_flags->options()), *mem_flags, out);
    };
  });

  // --- dual-member ----------------------------------------------------------
  auto* c_dual = app.add_subcommand("dual-member",
                                    "membership in K-derived cones of an augmented cone");
  auto dual_flags = std::make_shared<CommonFlags>();
  auto dual_cone_arg = std::make_shared<std::string>(std::string("example-K"));
  auto dual_which = std::make_shared<std::string>(std::string("dual"));
  auto dual_map = std::make_shared<std::string>();
  c_dual->add_option("--cone", *dual_cone_arg, "example-K or cone JSON file");
  c_dual->add_option("--which", *dual_which,
                     "dual|rdual|ldual|cone|smallest-rmc|smallest-lmc");
  c_dual->add_option("map", *dual_map, "map (builtin or file)")->required();
  add_common(c_dual, *dual_flags);
  c_dual->callback([&action, dual_flags, dual_cone_arg, dual_which, dual_map, &out]() {
    action = [dual_flags, dual_cone_arg, dual_which, dual_map, &out]() {
      ConeSpec spec = resolve_cone(*dual_cone_arg);
      if (spec.kind != ConeSpec::Kind::Augmented)
        throw ParseError("dual-member: cone must be an augmented cone");
      HPMap m = resolve_map(*dual_map);
      SolverOptions o = dual_flags->options();
      MembershipVerdict v;
      const std::string& w = *dual_which;
      if (w == "dual") v = in_dual(spec.aug, m, o);
      else if (w == "rdual") v = in_rdual(spec.aug, m, o);
      else if (w == "ldual") v = in_ldual(spec.aug, m, o);
      else if (w == "cone") v = in_cone(spec.aug, m, o);
      else if (w == "smallest-rmc") v = in_smallest_rmc(spec.aug, m, o);
      else if (w == "smallest-lmc") v = in_smallest_lmc(spec.aug, m, o);
      else throw ParseError("dual-member: unknown --which " + w);
      return emit_verdict(v, *dual_flags, out);
    };
  });

  // --- one-sided-check ------------------------------------------------------
  auto* c_osc = app.add_subcommand("one-sided-check",
                                   "sampling harness for one-sided stability");
  auto osc_flags = std::make_shared<CommonFlags>();
  auto osc_cone = std::make_shared<std::string>(std::string("cp"));
  auto osc_samples = std::make_shared<int>(200);
  c_osc->add_option("--cone", *osc_cone, "cp|ccp|ppt|dec|example-K|cp-after-e11|file");
  c_osc->add_option("--samples", *osc_samples, "sample count");
  add_common(c_osc, *osc_flags);
  c_osc->callback([&action, osc_flags, osc_cone, osc_samples, &out]() {
    action = [osc_flags, osc_cone, osc_samples, &out]() {
      ConeSpec spec = resolve_cone(*osc_cone);
      auto rep = check_one_sided_equivalences(spec, *osc_samples, osc_flags->seed,
                                              osc_flags->options());
      if (osc_flags->as_json) {
        out << to_json(rep).dump(2) << "\n";
      } else {
        out << "cone " << rep.cone << ", seed " << rep.seed << "\n";
        for (const auto& c : rep.checks) {
          out << (c.passed ? "  [ok]   " : "  [fail] ") << c.name << " (" << c.samples
              << " samples";
          if (c.expected_to_fail) out << ", failure expected";
          out << ")\n";
          for (const auto& v : c.violations) out << "         " << v << "\n";
        }
      }
      return rep.failures() == 0 ? 0 : 1;
    };
  });

  // --- ampliation-check -----------------------------------------------------
  auto* c_amp = app.add_subcommand("ampliation-check",
                                   "cross-check the ampliation characterizations");
  auto amp_flags = std::make_shared<CommonFlags>();
  auto amp_cone = std::make_shared<std::string>(std::string("example-K"));
  auto amp_map = std::make_shared<std::string>();
  auto amp_side = std::make_shared<std::string>(std::string("right"));
  auto amp_samples = std::make_shared<int>(24);
  c_amp->add_option("--cone", *amp_cone, "augmented cone (example-K or file)");
  c_amp->add_option("--side", *amp_side, "right|left");
  c_amp->add_option("--samples", *amp_samples, "samples per quantified clause");
  c_amp->add_option("map", *amp_map, "map (builtin or file)")->required();
  add_common(c_amp, *amp_flags);
  c_amp->callback([&action, amp_flags, amp_cone, amp_map, amp_side, amp_samples, &out]() {
    action = [amp_flags, amp_cone, amp_map, amp_side, amp_samples, &out]() {
      ConeSpec spec = resolve_cone(*amp_cone);
      if (spec.kind != ConeSpec::Kind::Augmented)
        throw ParseError("ampliation-check: cone must be an augmented cone");
      HPMap m = resolve_map(*amp_map);
      auto rep = ampliation_crosscheck(spec.aug, m, *amp_side, *amp_samples,
                                       amp_flags->seed, amp_flags->options());
      if (amp_flags->as_json) {
        out << to_json(rep).dump(2) << "\n";
      } else {
        for (std::size_t i = 0; i < rep.predicates.size(); ++i)
          out << "  (" << i + 1 << ") "
              << (rep.verdicts[i] == 1 ? "holds " : rep.verdicts[i] == 0 ? "fails " : "unknown")
              << " : " << rep.predicates[i] << "\n";
        out << (rep.agree ? "all predicates agree\n" : "DISAGREEMENT\n");
      }
      return rep.agree ? 0 : 1;
    };
  });

  // --- ppt2 -----------------------------------------------------------------
  auto* c_ppt2 = app.add_subcommand("ppt2", "PPT-square experiment harness");
  auto p2_flags = std::make_shared<CommonFlags>();
  auto p2_dimA = std::make_shared<int>(2);
  auto p2_dimB = std::make_shared<int>(2);
  auto p2_trials = std::make_shared<int>(20);
  auto p2_statement = std::make_shared<std::string>();
  auto p2_ledger = std::make_shared<std::string>();
  c_ppt2->add_option("--dimA", *p2_dimA, "input dimension");
  c_ppt2->add_option("--dimB", *p2_dimB, "output dimension");
  c_ppt2->add_option("--trials", *p2_trials, "number of sampled trials");
  c_ppt2->add_option("--statement", *p2_statement,
                     "equivalence statement i..vii (default: composition trials)");
  c_ppt2->add_option("--ledger", *p2_ledger, "append TrialRecords as JSON lines");
  add_common(c_ppt2, *p2_flags);
  c_ppt2->callback([&action, p2_flags, p2_dimA, p2_dimB, p2_trials, p2_statement, p2_ledger,
                    &out]() {
    action = [p2_flags, p2_dimA, p2_dimB, p2_trials, p2_statement, p2_ledger, &out]() {
      SolverOptions o = p2_flags->options();
      if (!p2_statement->empty()) {
        auto rep = equivalence_sampler(*p2_statement, *p2_trials, *p2_dimA, *p2_dimB,
                                       p2_flags->seed, o);
        if (p2_flags->as_json)
          out << to_json(rep).dump(2) << "\n";
        else
          out << "statement (" << rep.statement << "): " << rep.passes << " pass, "
              << rep.unknowns << " unknown, " << rep.failures << " fail over "
              << rep.trials << " trials\n";
        return rep.failures == 0 ? 0 : 1;
      }
      std::ofstream ledger;
      if (!p2_ledger->empty()) ledger.open(*p2_ledger, std::ios::app);
      int candidates = 0, unknowns = 0;
      for (int t = 0; t < *p2_trials; ++t) {
        std::uint64_t s = mix_seed(p2_flags->seed, t);
        HPMap phi = sample_ppt_map(*p2_dimA, *p2_dimB, mix_seed(s, 1));
        HPMap psi = sample_ppt_map(*p2_dimA, *p2_dimB, mix_seed(s, 2));
        TrialRecord rec = ppt_square_trial(phi, psi, o);
        rec.trial = t;
        rec.seed = s;
        if (rec.flag == "candidate-counterexample") ++candidates;
        if (rec.flag == "unknown") ++unknowns;
        if (ledger.is_open()) ledger << to_json(rec).dump() << "\n";
        if (!p2_flags->as_json)
          out << "trial " << t << ": eb=" << to_string(rec.eb.status)
              << " ppt=" << to_string(rec.ppt.status) << " flag=" << rec.flag << "\n";
        else
          out << to_json(rec).dump() << "\n";
      }
      out << *p2_trials << " trials, " << unknowns << " unknown, " << candidates
          << " candidate counterexamples\n";
      return candidates == 0 ? 0 : 1;
    };
  });

  // --- paper-examples ---------------------------------------------------------
  auto* c_pex = app.add_subcommand("paper-examples",
                                   "replay the built-in fixture table (pass/fail)");
  auto pex_flags = std::make_shared<CommonFlags>();
  add_common(c_pex, *pex_flags);
  c_pex->callback([&action, pex_flags, &out]() {
    action = [pex_flags, &out]() {
      return run_paper_fixtures(out, pex_flags->options()) ? 0 : 1;
    };
  });

  std::vector<const char*> argv;
  argv.push_back("mapcones");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 6;
  }

  try {
    return action ? action() : 5;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 5;
  }
}

}  // namespace mapcones::cli
