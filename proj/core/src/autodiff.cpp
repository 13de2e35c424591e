#include "fourier_ocp/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "fourier_ocp/errors.hpp"

namespace fourier_ocp::ad {

namespace {

double apply_unary(OpKind op, double x, double param) {
  switch (op) {
    case OpKind::add_scalar: return x + param;
    case OpKind::mul_scalar: return x * param;
    case OpKind::scalar_sub: return param - x;
    case OpKind::scalar_div: return param / x;
    case OpKind::neg: return -x;
    case OpKind::pow_int: return pow_int(x, static_cast<int>(param));
    case OpKind::sin: return std::sin(x);
    case OpKind::cos: return std::cos(x);
    case OpKind::exp: return std::exp(x);
    case OpKind::sqrt: return std::sqrt(x);
    case OpKind::max0: return max0(x);
    case OpKind::square: return x * x;
    default: break;
  }
  throw ArgumentError(std::string("not a unary op: ") + to_string(op));
}

double unary_partial(OpKind op, double x, double value, double param) {
  switch (op) {
    case OpKind::add_scalar: return 1.0;
    case OpKind::mul_scalar: return param;
    case OpKind::scalar_sub: return -1.0;
    case OpKind::scalar_div: return -param / (x * x);
    case OpKind::neg: return -1.0;
    case OpKind::pow_int: {
      const int n = static_cast<int>(param);
      return n == 0 ? 0.0 : static_cast<double>(n) * pow_int(x, n - 1);
    }
    case OpKind::sin: return std::cos(x);
    case OpKind::cos: return -std::sin(x);
    case OpKind::exp: return value;
    case OpKind::sqrt: return 0.5 / value;
    case OpKind::max0: return x > 0.0 ? 1.0 : 0.0;
    case OpKind::square: return 2.0 * x;
    default: break;
  }
  throw ArgumentError(std::string("not a unary op: ") + to_string(op));
}

double apply_binary(OpKind op, double a, double b) {
  switch (op) {
    case OpKind::add: return a + b;
    case OpKind::sub: return a - b;
    case OpKind::mul: return a * b;
    case OpKind::div: return a / b;
    default: break;
  }
  throw ArgumentError(std::string("not a binary op: ") + to_string(op));
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

const char* to_string(OpKind op) {
  switch (op) {
    case OpKind::constant: return "constant";
    case OpKind::input: return "input";
    case OpKind::add: return "add";
    case OpKind::sub: return "sub";
    case OpKind::mul: return "mul";
    case OpKind::div: return "div";
    case OpKind::add_scalar: return "add_scalar";
    case OpKind::mul_scalar: return "mul_scalar";
    case OpKind::scalar_sub: return "scalar_sub";
    case OpKind::scalar_div: return "scalar_div";
    case OpKind::neg: return "neg";
    case OpKind::pow_int: return "pow_int";
    case OpKind::sin: return "sin";
    case OpKind::cos: return "cos";
    case OpKind::exp: return "exp";
    case OpKind::sqrt: return "sqrt";
    case OpKind::max0: return "max0";
    case OpKind::square: return "square";
    case OpKind::linear: return "linear";
  }
  return "unknown";
}

double pow_int(double x, int n) {
  if (n < 0) return 1.0 / pow_int(x, -n);
  double result = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

std::uint32_t Tape::push(OpKind op, double value, double param) {
  const auto index = static_cast<std::uint32_t>(value_.size());
  value_.push_back(value);
  param_.push_back(param);
  op_.push_back(op);
  arg_begin_.push_back(static_cast<std::uint32_t>(parent_.size()));
  return index;
}

void Tape::check_owned(const AdValue& v) const {
  if (v.tape_ != this || v.index_ >= value_.size()) {
    throw ArgumentError("value does not belong to this tape");
  }
}

double Tape::checked(double value, OpKind op) const {
  if (!std::isfinite(value)) {
    throw DataError(std::string("non-finite result of '") + to_string(op) + "' at node " +
                    std::to_string(value_.size()));
  }
  return value;
}

AdValue Tape::input(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite input value");
  const auto idx = push(OpKind::input, x, x);
  inputs_.push_back(idx);
  return AdValue(this, idx, x);
}

AdValue Tape::lift(double x) {
  if (!std::isfinite(x)) throw DataError("non-finite constant");
  return AdValue(this, push(OpKind::constant, x, x), x);
}

AdValue Tape::unary(OpKind op, const AdValue& x, double param) {
  check_owned(x);
  const double xv = x.value_;
  if (op == OpKind::sqrt && xv < 0.0) {
    throw DataError("sqrt of negative value at node " + std::to_string(value_.size()) +
                    " (parent node " + std::to_string(x.index_) + ")");
  }
  if (op == OpKind::scalar_div && xv == 0.0) {
    throw DataError("division by zero at node " + std::to_string(value_.size()) +
                    " (parent node " + std::to_string(x.index_) + ")");
  }
  if (op == OpKind::pow_int && param < 0.0 && xv == 0.0) {
    throw DataError("negative power of zero at node " + std::to_string(value_.size()));
  }
  const double v = checked(apply_unary(op, xv, param), op);
  const double d = unary_partial(op, xv, v, param);
  const auto idx = push(op, v, param);
  parent_.push_back(x.index_);
  partial_.push_back(d);
  arg_begin_.back() = static_cast<std::uint32_t>(parent_.size());
  return AdValue(this, idx, v);
}

AdValue Tape::binary(OpKind op, const AdValue& a, const AdValue& b) {
  check_owned(a);
  check_owned(b);
  const double av = a.value_;
  const double bv = b.value_;
  if (op == OpKind::div && bv == 0.0) {
    throw DataError("division by zero at node " + std::to_string(value_.size()) +
                    " (denominator node " + std::to_string(b.index_) + ")");
  }
  const double v = checked(apply_binary(op, av, bv), op);
  double da = 0.0;
  double db = 0.0;
  switch (op) {
    case OpKind::add: da = 1.0; db = 1.0; break;
    case OpKind::sub: da = 1.0; db = -1.0; break;
    case OpKind::mul: da = bv; db = av; break;
    case OpKind::div: da = 1.0 / bv; db = -av / (bv * bv); break;
    default: break;
  }
  const auto idx = push(op, v, 0.0);
  parent_.push_back(a.index_);
  partial_.push_back(da);
  parent_.push_back(b.index_);
  partial_.push_back(db);
  arg_begin_.back() = static_cast<std::uint32_t>(parent_.size());
  return AdValue(this, idx, v);
}

AdValue Tape::linear_combination(std::span<const AdValue> terms, std::span<const double> weights) {
  if (terms.size() != weights.size()) throw ArgumentError("linear_combination: size mismatch");
  double v = 0.0;
  const auto idx = push(OpKind::linear, 0.0, 0.0);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (weights[k] == 0.0) continue;
    check_owned(terms[k]);
    v += weights[k] * terms[k].value_;
    parent_.push_back(terms[k].index_);
    partial_.push_back(weights[k]);
  }
  arg_begin_.back() = static_cast<std::uint32_t>(parent_.size());
  value_[idx] = checked(v, OpKind::linear);
  return AdValue(this, idx, v);
}

AdValue Tape::linear_combination(std::span<const AdValue> pool, std::span<const std::uint32_t> indices,
                                 std::span<const double> weights) {
  if (indices.size() != weights.size()) throw ArgumentError("linear_combination: size mismatch");
  double v = 0.0;
  const auto idx = push(OpKind::linear, 0.0, 0.0);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const AdValue& term = pool[indices[k]];
    check_owned(term);
    v += weights[k] * term.value_;
    parent_.push_back(term.index_);
    partial_.push_back(weights[k]);
  }
  arg_begin_.back() = static_cast<std::uint32_t>(parent_.size());
  value_[idx] = checked(v, OpKind::linear);
  return AdValue(this, idx, v);
}

AdValue Tape::sum(std::span<const AdValue> terms) {
  double v = 0.0;
  const auto idx = push(OpKind::linear, 0.0, 0.0);
  for (const auto& t : terms) {
    check_owned(t);
    v += 1.0 * t.value_;
    parent_.push_back(t.index_);
    partial_.push_back(1.0);
  }
  arg_begin_.back() = static_cast<std::uint32_t>(parent_.size());
  value_[idx] = checked(v, OpKind::linear);
  return AdValue(this, idx, v);
}

std::span<const std::uint32_t> Tape::parents(std::uint32_t node) const {
  return std::span<const std::uint32_t>(parent_).subspan(arg_begin_[node], arg_begin_[node + 1] - arg_begin_[node]);
}

std::span<const double> Tape::partials(std::uint32_t node) const {
  return std::span<const double>(partial_).subspan(arg_begin_[node], arg_begin_[node + 1] - arg_begin_[node]);
}

std::vector<double> Tape::backward(const AdValue& output) const {
  std::vector<double> gradient(inputs_.size());
  backward(output, gradient);
  return gradient;
}

void Tape::backward(const AdValue& output, std::span<double> gradient) const {
  check_owned(output);
  if (gradient.size() != inputs_.size()) throw ArgumentError("gradient buffer has wrong size");
  adjoint_.assign(output.index_ + 1, 0.0);
  adjoint_[output.index_] = 1.0;
  for (std::uint32_t i = output.index_ + 1; i-- > 0;) {
    const double a = adjoint_[i];
    if (a == 0.0) continue;
    const std::uint32_t end = arg_begin_[i + 1];
    for (std::uint32_t k = arg_begin_[i]; k < end; ++k) {
      adjoint_[parent_[k]] += a * partial_[k];
    }
  }
  for (std::size_t j = 0; j < inputs_.size(); ++j) {
    gradient[j] = inputs_[j] <= output.index_ ? adjoint_[inputs_[j]] : 0.0;
  }
}

bool Tape::replay_matches() const {
  std::vector<double> replayed(value_.size());
  for (std::uint32_t i = 0; i < value_.size(); ++i) {
    const std::uint32_t b = arg_begin_[i];
    const std::uint32_t e = arg_begin_[i + 1];
    for (std::uint32_t k = b; k < e; ++k) {
      if (parent_[k] >= i) return false;
    }
    double v = 0.0;
    switch (op_[i]) {
      case OpKind::constant:
      case OpKind::input: v = param_[i]; break;
      case OpKind::add:
      case OpKind::sub:
      case OpKind::mul:
      case OpKind::div: v = apply_binary(op_[i], replayed[parent_[b]], replayed[parent_[b + 1]]); break;
      case OpKind::linear:
        for (std::uint32_t k = b; k < e; ++k) v += partial_[k] * replayed[parent_[k]];
        break;
      default: v = apply_unary(op_[i], replayed[parent_[b]], param_[i]); break;
    }
    if (!same_bits(v, value_[i])) return false;
    replayed[i] = v;
  }
  return true;
}

void Tape::clear() {
  value_.clear();
  param_.clear();
  op_.clear();
  arg_begin_.assign(1, 0);
  parent_.clear();
  partial_.clear();
  inputs_.clear();
}

void Tape::reserve(std::size_t nodes, std::size_t edges) {
  value_.reserve(nodes);
  param_.reserve(nodes);
  op_.reserve(nodes);
  arg_begin_.reserve(nodes + 1);
  parent_.reserve(edges);
  partial_.reserve(edges);
}

namespace {
Tape& tape_of(const AdValue& a) {
  if (a.tape() == nullptr) throw ArgumentError("value is not attached to a tape");
  return *a.tape();
}
}  // namespace

AdValue operator+(const AdValue& a, const AdValue& b) { return tape_of(a).binary(OpKind::add, a, b); }
AdValue operator-(const AdValue& a, const AdValue& b) { return tape_of(a).binary(OpKind::sub, a, b); }
AdValue operator*(const AdValue& a, const AdValue& b) { return tape_of(a).binary(OpKind::mul, a, b); }
AdValue operator/(const AdValue& a, const AdValue& b) { return tape_of(a).binary(OpKind::div, a, b); }
AdValue operator-(const AdValue& a) { return tape_of(a).unary(OpKind::neg, a); }

AdValue operator+(const AdValue& a, double c) { return tape_of(a).unary(OpKind::add_scalar, a, c); }
AdValue operator+(double c, const AdValue& a) { return tape_of(a).unary(OpKind::add_scalar, a, c); }
AdValue operator-(const AdValue& a, double c) { return tape_of(a).unary(OpKind::add_scalar, a, -c); }
AdValue operator-(double c, const AdValue& a) { return tape_of(a).unary(OpKind::scalar_sub, a, c); }
AdValue operator*(const AdValue& a, double c) { return tape_of(a).unary(OpKind::mul_scalar, a, c); }
AdValue operator*(double c, const AdValue& a) { return tape_of(a).unary(OpKind::mul_scalar, a, c); }
AdValue operator/(const AdValue& a, double c) {
  if (c == 0.0) throw DataError("division of tape value by constant zero");
  return tape_of(a).unary(OpKind::mul_scalar, a, 1.0 / c);
}
AdValue operator/(double c, const AdValue& a) { return tape_of(a).unary(OpKind::scalar_div, a, c); }

AdValue sin(const AdValue& x) { return tape_of(x).unary(OpKind::sin, x); }
AdValue cos(const AdValue& x) { return tape_of(x).unary(OpKind::cos, x); }
AdValue exp(const AdValue& x) { return tape_of(x).unary(OpKind::exp, x); }
AdValue sqrt(const AdValue& x) { return tape_of(x).unary(OpKind::sqrt, x); }
AdValue max0(const AdValue& x) { return tape_of(x).unary(OpKind::max0, x); }
AdValue square(const AdValue& x) { return tape_of(x).unary(OpKind::square, x); }
AdValue pow_int(const AdValue& x, int n) {
  return tape_of(x).unary(OpKind::pow_int, x, static_cast<double>(n));
}

double linear_combination(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) throw ArgumentError("linear_combination: size mismatch");
  double v = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) v += w[k] * x[k];
  return v;
}

AdValue linear_combination(std::span<const AdValue> x, std::span<const double> w) {
  if (x.empty()) throw ArgumentError("linear_combination over tape values needs at least one term");
  return tape_of(x.front()).linear_combination(x, w);
}

}  // namespace fourier_ocp::ad
