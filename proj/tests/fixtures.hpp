#pragma once

// Shared hand-checked datasets used across the test files. toy10 is the
// 10-row two-feature sample whose EM and Gibbs traces are frozen in the
// unit tests; select24 is the 24-row three-variable sample behind the
// model-selection goldens; cluster4 is the 4-row sample behind the
// dissimilarity goldens.

#include <vector>

#include "dml/events.hpp"

namespace fx {

// F1, F2 in {0,1}; class S has capacity 3 and is unobserved.
// Levels index values in first-appearance order, matching what loading the
// sample from disk produces: F1 value 1 -> 0, 2 -> 1; F2 value 2 -> 0,
// 1 -> 1 (the first row carries F2 = 2).
inline dml::ObservationSet toy10() {
  dml::ObservationSet d;
  d.schema.names = {"F1", "F2", "S"};
  d.schema.cards = {2, 2, 3};
  d.schema.class_col = 2;
  const int m = dml::kMissing;
  d.rows = {
      {0, 0, m}, {0, 0, m}, {1, 0, m}, {1, 0, m}, {0, 0, m},
      {0, 1, m}, {0, 1, m}, {0, 1, m}, {0, 0, m}, {1, 0, m},
  };
  return d;
}

// The frozen random initial assignment for the toy sample (0-based).
inline std::vector<int> init10() { return {0, 2, 1, 1, 0, 2, 0, 1, 1, 0}; }

// The partition the EM walkthrough converges to (0-based).
inline std::vector<int> em_final10() { return {0, 0, 1, 1, 0, 2, 2, 2, 0, 1}; }

// Labels imputed by the Gibbs walkthrough's second stochastic E-step
// (0-based).
inline std::vector<int> gibbs_iter2_labels() {
  return {1, 2, 1, 1, 2, 2, 2, 2, 1, 1};
}

// Three binary variables, 24 rows; C is the class column.
// freq(A,B,C): 001 x1, 010 x5, 011 x12, 101 x3, 110 x2, 111 x1.
inline dml::ObservationSet select24() {
  dml::ObservationSet d;
  d.schema.names = {"A", "B", "C"};
  d.schema.cards = {2, 2, 2};
  d.schema.class_col = 2;
  auto add = [&d](int a, int b, int c, int times) {
    for (int i = 0; i < times; ++i) d.rows.push_back({a, b, c});
  };
  add(0, 0, 1, 1);
  add(0, 1, 0, 5);
  add(0, 1, 1, 12);
  add(1, 0, 1, 3);
  add(1, 1, 0, 2);
  add(1, 1, 1, 1);
  return d;
}

// The 4-row, 3-feature sample whose dissimilarity matrix is hand-checked:
// rows 0 and 3 identical, row 1 two mismatches from them, row 2 one.
inline dml::ObservationSet cluster4() {
  dml::ObservationSet d;
  d.schema.names = {"W1", "W2", "W3", "S"};
  d.schema.cards = {3, 2, 2, 2};
  d.schema.class_col = 3;
  const int m = dml::kMissing;
  d.rows = {{0, 0, 0, m}, {1, 0, 1, m}, {2, 0, 0, m}, {0, 0, 0, m}};
  return d;
}

// Two latent classes with disjoint feature supports: class 0 rows use
// F1 in {0,1} and (F2,F3) = (0,0); class 1 rows use F1 in {2,3} and
// (F2,F3) = (1,1). Ten rows per distinct vector, 40 in total.
inline dml::ObservationSet separability40() {
  dml::ObservationSet d;
  d.schema.names = {"F1", "F2", "F3", "S"};
  d.schema.cards = {4, 2, 2, 2};
  d.schema.class_col = 3;
  const int m = dml::kMissing;
  auto add = [&d, m](int f1, int f2, int f3) {
    for (int i = 0; i < 10; ++i) d.rows.push_back({f1, f2, f3, m});
  };
  add(0, 0, 0);
  add(1, 0, 0);
  add(2, 1, 1);
  add(3, 1, 1);
  return d;
}

inline std::vector<int> separability40_gold() {
  std::vector<int> g(40, 0);
  for (int i = 20; i < 40; ++i) g[i] = 1;
  return g;
}

// Forty rows split between two feature vectors that disagree everywhere.
inline dml::ObservationSet twovec40() {
  dml::ObservationSet d;
  d.schema.names = {"F1", "F2", "S"};
  d.schema.cards = {2, 2, 2};
  d.schema.class_col = 2;
  const int m = dml::kMissing;
  for (int i = 0; i < 20; ++i) d.rows.push_back({0, 0, m});
  for (int i = 0; i < 20; ++i) d.rows.push_back({1, 1, m});
  return d;
}

inline std::vector<int> twovec40_gold() {
  std::vector<int> g(40, 0);
  for (int i = 20; i < 40; ++i) g[i] = 1;
  return g;
}

}  // namespace fx
