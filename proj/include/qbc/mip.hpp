#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbc/bigraph.hpp"
#include "qbc/bounds.hpp"
#include "qbc/error.hpp"
#include "qbc/rational.hpp"

namespace qbc {

enum class VarKind { Binary, Continuous, Integer };
enum class Relation { Le, Eq, Ge };
enum class Sense { Maximize, Minimize };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = 1.0;  // may be +infinity

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct QuadTerm {
  std::size_t a = 0, b = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> linear;
  std::vector<QuadTerm> quad;
  Relation rel = Relation::Ge;
  double rhs = 0.0;
};

enum class ModelKind { Model1Bilinear, Model1Linearized, Model2, Model2Bilinear, Parsed };

std::string to_string(ModelKind m);

struct MipMetadata {
  ModelKind model = ModelKind::Parsed;
  Rational gamma{1};
  SizeBounds bounds;
  EdgeRange k_range;
  std::optional<Rational> theta;
};

class MipError : public Error {
 public:
  using Error::Error;
};

// A mixed-integer program with linear objective and linear or bilinear
// constraints. Terms referring to the same variable are merged and zero
// coefficients dropped as constraints are added.
class MipInstance {
 public:
  // Names must be unique and match [A-Za-z_][A-Za-z0-9_]*.
  std::size_t add_variable(std::string name, VarKind kind, double lower = 0.0, double upper = 1.0);
  // Every referenced variable must exist; names must be unique.
  void add_constraint(Constraint c);
  void set_objective(Sense sense, std::vector<LinearTerm> terms);

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  Sense sense() const { return sense_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }
  std::optional<std::size_t> find(const std::string& name) const;
  bool is_linear() const;
  std::size_t count(VarKind kind) const;

  MipMetadata metadata;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  Sense sense_ = Sense::Maximize;
  std::vector<LinearTerm> objective_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::size_t> constraint_names_;
};

// Same variables (names, kinds, bounds), constraints and objective, in the
// same order, with coefficients equal up to a relative 1e-9.
bool structurally_equal(const MipInstance& a, const MipInstance& b);

enum class Model1Form { Bilinear, Linearized };

// Maximize |U'| + |V'|. Variables u_i, v_j, y_i_j (one per edge) are binary.
// The bilinear form adds continuous z1_n, z2_m >= 0 with sum 1 each and a
// density row sum y >= gamma sum n m z1_n z2_m. The linearized form uses
// binary z_n_m with sum 1, sum u = sum n z_n_m, sum v = sum m z_n_m and
// sum y >= gamma sum n m z_n_m. Each edge gets y <= u, y <= v, y >= u + v - 1.
MipInstance build_model1(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds,
                         Model1Form form = Model1Form::Linearized);

struct Model2Options {
  // z1_n / z2_m with a bilinear density row instead of binary z_n_m.
  bool bilinear = false;
  // Restrict w_k to the edge_count_bounds range instead of 1..|E|.
  bool tighten_k = true;
  // Density row on the plain sum of w_k (no k weights); that row is vacuous.
  bool unweighted_density = false;
};

// Maximize 2 sum log(k) w_k - sum (log n + log m) z_n_m (natural log) with
// binary w_k, sum w_k = 1, sum y = sum k w_k and sum k w_k >= gamma sum n m z_n_m.
// Throws InfeasibleError when the k range is empty.
MipInstance build_model2(const BipartiteGraph& g, const Rational& gamma, const SizeBounds& bounds,
                         const Model2Options& options = {});

// Adds (1 - theta) |V'| <= |U'| <= (1 + theta) |V'| in terms of the z
// channeling variables. on_indicators = true compares the indicator sums
// (sum z1 against sum z2) instead; those rows always hold.
void add_balance_constraints(MipInstance& instance, const Rational& theta, bool on_indicators = false);

struct LpOptions {
  // Allow bilinear rows, written in the `[ ... ]` quadratic extension.
  bool allow_quadratic = false;
};

// CPLEX LP text. Deterministic for a given instance.
std::string emit_lp(const MipInstance& instance, const LpOptions& options = {});

// Reads the LP subset produced by emit_lp (plus comments, free bounds and
// arbitrary line breaks). Throws ParseError.
MipInstance parse_lp(const std::string& text);

struct Assignment {
  std::string status = "optimal";
  std::optional<double> objective;
  std::map<std::string, double> values;

  bool infeasible() const { return status == "infeasible"; }
};

// `status <word>` (optional), `objective <value>`, then `<name> <value>`
// lines; `#` comments. Throws ParseError.
Assignment parse_solution(const std::string& text);
std::string format_solution(const Assignment& a);

// Rounds binary/integer variables (tolerance 1e-6) and checks that every
// instance variable is present. Throws MipError otherwise.
void normalize_assignment(const MipInstance& instance, Assignment& a);

// Writes the LP to a temporary directory, runs the command with `{lp}` and
// `{sol}` replaced by the file paths, and reads the solution file. Throws
// MipError with the captured output on failure.
Assignment run_external_solver(const MipInstance& instance, const std::string& command_template,
                               const LpOptions& options = {});

// Command from the environment variable QBC_SOLVER_CMD, else the `solver_cmd`
// key of a TOML config file, else nullopt.
std::optional<std::string> resolve_solver_command(const std::optional<std::filesystem::path>& config = std::nullopt);

// Name of the first violated bound, integrality requirement or constraint
// (tolerance 1e-6), or nullopt. Missing variables count as violations.
std::optional<std::string> first_violation(const MipInstance& instance, const std::map<std::string, double>& values,
                                           bool check_integrality = true);

double objective_value(const MipInstance& instance, const std::map<std::string, double>& values);

class VerificationError : public MipError {
 public:
  using MipError::MipError;
};

// Checks the assignment against every constraint, extracts U' and V' from
// u_i / v_j, checks y_i_j = u_i v_j, and checks the selection is a
// gamma-quasi-biclique. Throws VerificationError naming what failed.
Selection verify_assignment(const BipartiteGraph& g, const MipInstance& instance, const Assignment& assignment,
                            const Rational& gamma);

}  // namespace qbc
