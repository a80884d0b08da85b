#pragma once

// Genus-0 plane curve counts by two independent routes: Kontsevich's
// recursion (complex) and floor diagrams (complex and totally real).

#include "wsurg/integer.hpp"

#include <vector>

namespace wsurg {

/// A plane floor diagram of genus 0: d floors, elevators oriented from
/// floor `from` to floor `to`, and `sinks[v]` weight-1 ends below floor v.
/// Every floor has divergence out - in = 1 once its sinks are counted.
struct FloorDiagram {
  struct Edge {
    int from = 0;
    int to = 0;
    long weight = 1;
  };
  int degree = 0;
  std::vector<int> divergence;  // bounded edges only, at most 1
  std::vector<Edge> edges;
  std::vector<int> sinks;
};

struct DiagramCount {
  FloorDiagram diagram;
  Integer markings;        // marked diagrams up to isomorphism
  Integer complex_mult;    // product of squared weights
  int real_mult = 0;       // 1 when every weight is odd, else 0
};

constexpr int kOracleMaxDegree = 6;

/// N_d, the number of rational plane curves of degree d through 3d-1 points.
Integer kontsevich_nd(int d);

/// All genus-0 floor diagrams of degree d up to isomorphism, in a
/// deterministic order. Throws ValidationError for d outside [1, max_degree].
std::vector<DiagramCount> enumerate_diagrams(int d, int max_degree = kOracleMaxDegree);

struct OracleSummary {
  int degree = 0;
  Integer complex_total;
  Integer real_total;
  std::size_t diagram_count = 0;
};

OracleSummary oracle_summary(int d, int max_degree = kOracleMaxDegree);

/// The Welschinger count of CP2 for 3d-1 real points (s = 0).
Integer welschinger_s0(int d, int max_degree = kOracleMaxDegree);

}  // namespace wsurg
