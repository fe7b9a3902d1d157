#pragma once

// Three-valued membership verdicts with signed margins and re-checkable
// certificates, plus the solver option bundle shared by all decision ops.

#include "mapcones/matrix.hpp"

#include <string>
#include <vector>

namespace mapcones {

enum class Status { Member, NonMember, Unknown };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Member: return "member";
    case Status::NonMember: return "non-member";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

struct Certificate {
  // One of: "" (none), "eigenvector", "optimizer-vector", "witness-map",
  // "kraus-decomposition", "dec-split", "conic-decomposition".
  std::string kind;
  Vector vec;                    // eigenvector / optimizer vector
  Matrix mat_a, mat_b;           // witness Choi, or the two split parts
  std::vector<Matrix> kraus;     // Kraus list, weights folded in
  std::vector<double> weights;   // ray coefficients of a conic decomposition
  std::vector<Matrix> parts;     // PSD blocks of a conic decomposition
  std::string note;

  bool empty() const { return kind.empty(); }
};

/// status + signed margin (positive = inside) + optional certificate.
struct MembershipVerdict {
  Status status = Status::Unknown;
  double gap = 0.0;
  Certificate certificate;
  std::string meta;

  bool is_member() const { return status == Status::Member; }
  bool is_non_member() const { return status == Status::NonMember; }
  int exit_code() const {
    switch (status) {
      case Status::Member: return 0;
      case Status::NonMember: return 1;
      case Status::Unknown: return 2;
    }
    return 5;
  }
};

inline MembershipVerdict make_verdict(Status s, double gap, std::string meta = {}) {
  MembershipVerdict v;
  v.status = s;
  v.gap = gap;
  v.meta = std::move(meta);
  return v;
}

struct SolverOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  int restarts = 64;
  int max_iter = 0;  // 0 = per-solver default
  int threads = 1;

  SolverOptions with_seed(std::uint64_t s) const {
    SolverOptions o = *this;
    o.seed = s;
    return o;
  }
  SolverOptions light() const {  // cheap inner-loop profile (LMO calls)
    SolverOptions o = *this;
    o.restarts = std::max(4, restarts / 8);
    return o;
  }
};

}  // namespace mapcones
