// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "rcd/rabe/policy.hpp"

#include <algorithm>
#include <cctype>

#include "rcd/codec.hpp"
#include "rcd/error.hpp"

namespace rcd::rabe {

struct Policy::Node {
  Op op = Op::kConst;
  bool value = true;
  std::size_t index = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

Policy::Policy() : Policy(constant(true)) {}

Policy Policy::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->op = Op::kConst;
  n->value = value;
  return Policy(std::move(n));
}

Policy Policy::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->op = Op::kVar;
  n->index = index;
  return Policy(std::move(n));
}

Policy Policy::negate(Policy p) {
  auto n = std::make_shared<Node>();
  n->op = Op::kNot;
  n->a = std::move(p.root_);
  return Policy(std::move(n));
}

Policy Policy::conj(Policy a, Policy b) {
  auto n = std::make_shared<Node>();
  n->op = Op::kAnd;
  n->a = std::move(a.root_);
  n->b = std::move(b.root_);
  return Policy(std::move(n));
}

Policy Policy::disj(Policy a, Policy b) {
  auto n = std::make_shared<Node>();
  n->op = Op::kOr;
  n->a = std::move(a.root_);
  n->b = std::move(b.root_);
  return Policy(std::move(n));
}

Policy::Op Policy::op() const noexcept { return root_->op; }

namespace {

bool eval_node(const Policy::Node& n, const BitString& x) {
  switch (n.op) {
    case Policy::Op::kConst:
      return n.value;
    case Policy::Op::kVar:
      if (n.index >= x.size())
        throw Error(Errc::kWidthMismatch, "policy reads x" + std::to_string(n.index) + " but attribute has " +
                                              std::to_string(x.size()) + " bits");
      return x[n.index];
    case Policy::Op::kNot:
      return !eval_node(*n.a, x);
    case Policy::Op::kAnd:
      return eval_node(*n.a, x) && eval_node(*n.b, x);
    case Policy::Op::kOr:
      return eval_node(*n.a, x) || eval_node(*n.b, x);
  }
  return false;
}

std::size_t depth_node(const Policy::Node& n) {
  switch (n.op) {
    case Policy::Op::kConst:
    case Policy::Op::kVar:
      return 0;
    case Policy::Op::kNot:
      return 1 + depth_node(*n.a);
    default:
      return 1 + std::max(depth_node(*n.a), depth_node(*n.b));
  }
}

std::size_t width_node(const Policy::Node& n) {
  switch (n.op) {
    case Policy::Op::kConst:
      return 0;
    case Policy::Op::kVar:
      return n.index + 1;
    case Policy::Op::kNot:
      return width_node(*n.a);
    default:
      return std::max(width_node(*n.a), width_node(*n.b));
  }
}

}  // namespace

bool Policy::eval(const BitString& x) const { return eval_node(*root_, x); }
std::size_t Policy::depth() const noexcept { return depth_node(*root_); }
std::size_t Policy::width_needed() const noexcept { return width_node(*root_); }

bool policy_eval(const Policy& p, const BitString& x) { return p.eval(x); }

std::string Policy::to_string() const {
  switch (root_->op) {
    case Op::kConst:
      return root_->value ? "true" : "false";
    case Op::kVar:
      return "x" + std::to_string(root_->index);
    case Op::kNot:
      return "!" + Policy(root_->a).to_string();
    case Op::kAnd:
      return "(" + Policy(root_->a).to_string() + " & " + Policy(root_->b).to_string() + ")";
    case Op::kOr:
      return "(" + Policy(root_->a).to_string() + " | " + Policy(root_->b).to_string() + ")";
  }
  return "";
}

nlohmann::json Policy::to_json() const {
  switch (root_->op) {
    case Op::kConst:
      return {{"op", "const"}, {"value", root_->value}};
    case Op::kVar:
      return {{"op", "var"}, {"index", root_->index}};
    case Op::kNot:
      return {{"op", "not"}, {"arg", Policy(root_->a).to_json()}};
    case Op::kAnd:
      return {{"op", "and"}, {"args", {Policy(root_->a).to_json(), Policy(root_->b).to_json()}}};
    case Op::kOr:
      return {{"op", "or"}, {"args", {Policy(root_->a).to_json(), Policy(root_->b).to_json()}}};
  }
  return {};
}

Policy Policy::from_json(const nlohmann::json& j) {
  try {
    const std::string op = j.at("op").get<std::string>();
    if (op == "const") return constant(j.at("value").get<bool>());
    if (op == "var") return var(j.at("index").get<std::size_t>());
    if (op == "not") return negate(from_json(j.at("arg")));
    if (op == "and" || op == "or") {
      const auto& args = j.at("args");
      if (args.size() != 2) throw Error(Errc::kDecodeError, "policy '" + op + "' takes two arguments");
      return op == "and" ? conj(from_json(args[0]), from_json(args[1])) : disj(from_json(args[0]), from_json(args[1]));
    }
    throw Error(Errc::kDecodeError, "unknown policy op '" + op + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kDecodeError, std::string("policy json: ") + e.what());
  }
}

namespace {

void write_node(ByteWriter& w, const Policy::Node& n) {
  switch (n.op) {
    case Policy::Op::kConst:
      w.u8(0).u8(n.value ? 1 : 0);
      break;
    case Policy::Op::kVar:
      w.u8(1).u32(static_cast<std::uint32_t>(n.index));
      break;
    case Policy::Op::kNot:
      w.u8(2);
      write_node(w, *n.a);
      break;
    case Policy::Op::kAnd:
    case Policy::Op::kOr:
      w.u8(n.op == Policy::Op::kAnd ? 3 : 4);
      write_node(w, *n.a);
      write_node(w, *n.b);
      break;
  }
}

Policy read_node(ByteReader& r, int budget) {
  if (budget <= 0) throw Error(Errc::kDecodeError, "policy encoding nests too deeply");
  switch (r.u8()) {
    case 0:
      return Policy::constant(r.u8() != 0);
    case 1:
      return Policy::var(r.u32());
    case 2:
      return Policy::negate(read_node(r, budget - 1));
    case 3: {
      Policy a = read_node(r, budget - 1);
      return Policy::conj(std::move(a), read_node(r, budget - 1));
    }
    case 4: {
      Policy a = read_node(r, budget - 1);
      return Policy::disj(std::move(a), read_node(r, budget - 1));
    }
    default:
      throw Error(Errc::kDecodeError, "unknown policy tag");
  }
}

}  // namespace

Bytes Policy::serialize() const {
  ByteWriter w;
  write_node(w, *root_);
  return w.take();
}

Policy Policy::deserialize(BytesView in) {
  ByteReader r(in);
  Policy p = read_node(r, 1024);
  r.expect_done();
  return p;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Policy parse_all() {
    Policy p = parse_or();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool eat_word(std::string_view w) {
    skip();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::kDecodeError, "policy parse error at " + std::to_string(pos_) + ": " + why);
  }

  Policy parse_or() {
    Policy p = parse_and();
    while (eat('|')) p = Policy::disj(std::move(p), parse_and());
    return p;
  }
  Policy parse_and() {
    Policy p = parse_unary();
    while (eat('&')) p = Policy::conj(std::move(p), parse_unary());
    return p;
  }
  Policy parse_unary() {
    if (eat('!')) return Policy::negate(parse_unary());
    if (eat('(')) {
      Policy p = parse_or();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (eat_word("true")) return Policy::constant(true);
    if (eat_word("false")) return Policy::constant(false);
    skip();
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      return Policy::var(std::stoul(std::string(s_.substr(start, pos_ - start))));
    }
    fail("expected literal");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Policy Policy::parse(std::string_view text) { return Parser(text).parse_all(); }

Policy random_policy(std::size_t tau, std::size_t depth, Rng& rng) {
  if (tau == 0) throw Error(Errc::kParameterError, "random policy needs tau >= 1");
  if (depth == 0 || rng.below(4) == 0) return Policy::var(rng.below(tau));
  switch (rng.below(3)) {
    case 0:
      return Policy::negate(random_policy(tau, depth - 1, rng));
    case 1: {
      Policy a = random_policy(tau, depth - 1, rng);
      return Policy::conj(std::move(a), random_policy(tau, depth - 1, rng));
    }
    default: {
      Policy a = random_policy(tau, depth - 1, rng);
      return Policy::disj(std::move(a), random_policy(tau, depth - 1, rng));
    }
  }
}

Policy random_policy_satisfied_by(const BitString& x, std::size_t depth, Rng& rng) {
  Policy p = random_policy(x.size(), depth == 0 ? 0 : depth - 1, rng);
  return p.eval(x) ? p : Policy::negate(p);
}

Policy random_policy_rejecting(const BitString& x, std::size_t depth, Rng& rng) {
  Policy p = random_policy(x.size(), depth == 0 ? 0 : depth - 1, rng);
  return p.eval(x) ? Policy::negate(p) : p;
}

}  // namespace rcd::rabe
