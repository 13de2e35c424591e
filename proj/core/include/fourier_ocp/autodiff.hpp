#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace fourier_ocp::ad {

enum class OpKind : std::uint8_t {
  constant,
  input,
  add,
  sub,
  mul,
  div,
  add_scalar,
  mul_scalar,
  scalar_sub,  // c - x
  scalar_div,  // c / x
  neg,
  pow_int,
  sin,
  cos,
  exp,
  sqrt,
  max0,
  square,
  linear,  // sum_k w_k x_k
};

const char* to_string(OpKind op);

class Tape;

/// Handle to one node of a Tape plus its cached primal value. Cheap to copy;
/// only valid while the owning tape is alive and has not been cleared.
class AdValue {
 public:
  AdValue() = default;

  double value() const noexcept { return value_; }
  std::uint32_t index() const noexcept { return index_; }
  Tape* tape() const noexcept { return tape_; }

 private:
  friend class Tape;
  AdValue(Tape* tape, std::uint32_t index, double value) : tape_(tape), index_(index), value_(value) {}

  Tape* tape_ = nullptr;
  std::uint32_t index_ = 0;
  double value_ = 0.0;
};

/// Append-only record of scalar operations. Each node stores its op kind, its
/// parents and the local partial derivative with respect to each parent, so a
/// single reverse sweep yields d(output)/d(input_i) for every seeded input.
///
/// Parents always precede children, which makes the record a valid
/// topological order by construction.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Seed variable. Gradients returned by backward() are ordered by the
  /// sequence of input() calls.
  AdValue input(double x);
  /// Constant node; zero gradient.
  AdValue lift(double x);

  AdValue unary(OpKind op, const AdValue& x, double param = 0.0);
  AdValue binary(OpKind op, const AdValue& a, const AdValue& b);

  /// sum_k weights[k] * terms[k]. Zero weights are dropped from the record.
  AdValue linear_combination(std::span<const AdValue> terms, std::span<const double> weights);
  /// sum_k weights[k] * pool[indices[k]]; used for sparse basis rows.
  AdValue linear_combination(std::span<const AdValue> pool, std::span<const std::uint32_t> indices,
                             std::span<const double> weights);
  AdValue sum(std::span<const AdValue> terms);

  std::size_t size() const noexcept { return value_.size(); }
  std::size_t input_count() const noexcept { return inputs_.size(); }
  std::size_t edge_count() const noexcept { return parent_.size(); }

  OpKind op(std::uint32_t node) const { return op_[node]; }
  std::span<const std::uint32_t> parents(std::uint32_t node) const;
  std::span<const double> partials(std::uint32_t node) const;
  double value(std::uint32_t node) const { return value_[node]; }

  /// d(output)/d(input_i) for every input, in input() order.
  std::vector<double> backward(const AdValue& output) const;
  void backward(const AdValue& output, std::span<double> gradient) const;

  /// Recomputes every node from its parents and compares with the stored
  /// value bit for bit.
  bool replay_matches() const;

  void clear();
  void reserve(std::size_t nodes, std::size_t edges);

 private:
  std::uint32_t push(OpKind op, double value, double param);
  void check_owned(const AdValue& v) const;
  double checked(double value, OpKind op) const;

  std::vector<double> value_;
  std::vector<double> param_;
  std::vector<OpKind> op_;
  std::vector<std::uint32_t> arg_begin_{0};
  std::vector<std::uint32_t> parent_;
  std::vector<double> partial_;
  std::vector<std::uint32_t> inputs_;
  mutable std::vector<double> adjoint_;
};

// Elementary ops. The double overloads let generic code be instantiated with
// either plain doubles or tape values.

inline double max0(double x) { return x > 0.0 ? x : 0.0; }
inline double square(double x) { return x * x; }
double pow_int(double x, int n);

AdValue operator+(const AdValue& a, const AdValue& b);
AdValue operator-(const AdValue& a, const AdValue& b);
AdValue operator*(const AdValue& a, const AdValue& b);
AdValue operator/(const AdValue& a, const AdValue& b);
AdValue operator-(const AdValue& a);

AdValue operator+(const AdValue& a, double c);
AdValue operator+(double c, const AdValue& a);
AdValue operator-(const AdValue& a, double c);
AdValue operator-(double c, const AdValue& a);
AdValue operator*(const AdValue& a, double c);
AdValue operator*(double c, const AdValue& a);
AdValue operator/(const AdValue& a, double c);
AdValue operator/(double c, const AdValue& a);

AdValue sin(const AdValue& x);
AdValue cos(const AdValue& x);
AdValue exp(const AdValue& x);
AdValue sqrt(const AdValue& x);
/// max(0, x). The subgradient at x == 0 is taken as 0.
AdValue max0(const AdValue& x);
AdValue square(const AdValue& x);
AdValue pow_int(const AdValue& x, int n);

/// sum_k w[k] x[k]; the tape overload records a single node.
double linear_combination(std::span<const double> x, std::span<const double> w);
AdValue linear_combination(std::span<const AdValue> x, std::span<const double> w);

}  // namespace fourier_ocp::ad
