#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qs3/chart.hpp"
#include "qs3/expr.hpp"

namespace qs3 {

using ExprVec = std::vector<Expr>;                // vector / covector components
using ExprMat = std::vector<std::vector<Expr>>;   // endomorphism / bilinear components

// Chart-based model of an almost contact metric 3-structure: a metric g, three
// endomorphism fields phi_a, three Reeb fields xi_a and their duals eta_a, all
// given as closed-form component expressions in the chart coordinates.
struct ManifoldModel {
  std::string name;
  ChartDomain dom;
  ExprMat g;                       // d x d, symmetric
  std::array<ExprMat, 3> phi;      // phi[a][k][i] = component k of phi_a(d/dx_i)
  std::array<ExprVec, 3> xi;
  std::array<ExprVec, 3> eta;
  std::optional<double> declared_c;

  // Closed-form generating fields of the two horizontal blocks, when the
  // construction provides them (products and spheres do). Identity checks
  // that require genuine vector *fields* in a block use these; they are
  // reported n/a when a block has no generators.
  std::vector<ExprVec> e4l_fields;
  std::vector<ExprVec> e4m_fields;

  // g-orthogonal projections onto the two horizontal blocks as closed-form
  // endomorphism fields (empty when the construction cannot express them).
  // Lie-derivative checks of the block projections of phi need these; the
  // pointwise splitting cannot be differentiated.
  ExprMat proj_e4l;
  ExprMat proj_e4m;

  int dim() const { return dom.dimension; }
};

// -- small Expr linear algebra helpers ---------------------------------------

ExprVec expr_zero_vec(int d);
ExprMat expr_zero_mat(int d);
ExprMat expr_identity(int d);

Expr expr_dot(const ExprVec& a, const ExprVec& b);              // sum a_i b_i
ExprVec expr_mat_vec(const ExprMat& m, const ExprVec& v);
ExprMat expr_mat_mul(const ExprMat& a, const ExprMat& b);
ExprMat expr_scale(const ExprMat& m, const Expr& s);
ExprVec expr_scale(const ExprVec& v, const Expr& s);
ExprVec expr_sub(const ExprVec& a, const ExprVec& b);
ExprVec expr_add(const ExprVec& a, const ExprVec& b);
ExprMat expr_mat_add(const ExprMat& a, const ExprMat& b);
ExprMat expr_mat_sub(const ExprMat& a, const ExprMat& b);
ExprMat expr_outer(const ExprVec& u, const ExprVec& w);         // u w^T

// sum_a xi_a (x) eta_a: the g-orthogonal projection onto the vertical block.
ExprMat vertical_projection_field(const ManifoldModel& M);

// Fundamental 2-form of structure a as an expression field:
// Phi_a(X, Y) = g(X, phi_a Y), components (g * phi_a)_{ij}.
ExprMat fundamental_form_field(const ManifoldModel& M, int a);

// eta_a(Y) as a scalar expression for an expression field Y.
Expr eta_applied(const ManifoldModel& M, int a, const ExprVec& y);

// Horizontal part of a field: Y - sum_a eta_a(Y) xi_a.
ExprVec horizontal_part_field(const ManifoldModel& M, const ExprVec& y);

// Coordinate field d/dx_i as an expression field.
ExprVec coordinate_field(int d, int i);

}  // namespace qs3
