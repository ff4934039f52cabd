#include "eqtest/core/group_action.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>

#include "eqtest/core/errors.hpp"

namespace eqt {

SignedPermutation::SignedPermutation(std::vector<std::uint32_t> source, std::vector<std::int8_t> sign)
    : source_(std::move(source)), sign_(std::move(sign)) {
  if (source_.size() != sign_.size()) throw InputError("permutation and sign vectors differ in length");
  std::vector<bool> seen(source_.size(), false);
  for (std::uint32_t s : source_) {
    if (s >= source_.size() || seen[s]) throw InputError("not a permutation");
    seen[s] = true;
  }
  for (std::int8_t s : sign_) {
    if (s != 1 && s != -1) throw InputError("signs must be +1 or -1");
  }
}

SignedPermutation SignedPermutation::from_permutation(std::vector<std::uint32_t> source) {
  std::vector<std::int8_t> sign(source.size(), 1);
  return SignedPermutation(std::move(source), std::move(sign));
}

void SignedPermutation::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t k = source_.size();
  for (std::size_t i = 0; i < k; ++i) out[i] = sign_[i] * in[source_[i]];
  std::copy(in.begin() + static_cast<std::ptrdiff_t>(k), in.end(),
            out.begin() + static_cast<std::ptrdiff_t>(k));
}

SignedPermutation SignedPermutation::compose(const SignedPermutation& outer,
                                             const SignedPermutation& inner) {
  const std::size_t k = std::max(outer.size(), inner.size());
  std::vector<std::uint32_t> source(k);
  std::vector<std::int8_t> sign(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t mid = i < outer.size() ? outer.source_[i] : static_cast<std::uint32_t>(i);
    const std::int8_t outer_sign = i < outer.size() ? outer.sign_[i] : std::int8_t{1};
    const std::uint32_t src = mid < inner.size() ? inner.source_[mid] : mid;
    const std::int8_t inner_sign = mid < inner.size() ? inner.sign_[mid] : std::int8_t{1};
    source[i] = src;
    sign[i] = static_cast<std::int8_t>(outer_sign * inner_sign);
  }
  return SignedPermutation(std::move(source), std::move(sign));
}

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::axis_rotation: return "axis_rotation";
    case ActionKind::axis_sign_rotation: return "axis_sign_rotation";
    case ActionKind::trivial: return "trivial";
    case ActionKind::image_d4: return "image_d4";
    case ActionKind::permutation: return "permutation";
    case ActionKind::user: return "user";
  }
  return "unknown";
}

namespace {

SignedPermutation power(const SignedPermutation& p, unsigned k) {
  SignedPermutation result;
  for (unsigned i = 0; i < k; ++i) result = SignedPermutation::compose(p, result);
  return result;
}

// Z4 on <R> with the given input generator and trivial outputs.
std::vector<std::uint32_t> cyclic_table(std::uint32_t order) {
  std::vector<std::uint32_t> table(order * order);
  for (std::uint32_t i = 0; i < order; ++i)
    for (std::uint32_t j = 0; j < order; ++j) table[i * order + j] = (i + j) % order;
  return table;
}

}  // namespace

SignedPermutation d4_pixel_permutation(std::size_t side, unsigned quarter_turns, bool reflect) {
  if (side == 0) throw InputError("image side must be positive");
  const std::size_t pixels = side * side;
  std::vector<std::uint32_t> turn(pixels);
  std::vector<std::uint32_t> flip(pixels);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      // Counter-clockwise: the top-right pixel moves to the top-left.
      turn[r * side + c] = static_cast<std::uint32_t>(c * side + (side - 1 - r));
      flip[r * side + c] = static_cast<std::uint32_t>(r * side + (side - 1 - c));
    }
  }
  SignedPermutation result = power(SignedPermutation::from_permutation(turn), quarter_turns % 4);
  if (reflect) result = SignedPermutation::compose(SignedPermutation::from_permutation(flip), result);
  // Keep the full length so the element always demands side*side pixels.
  if (result.size() < pixels) {
    std::vector<std::uint32_t> id(pixels);
    std::iota(id.begin(), id.end(), 0u);
    result = SignedPermutation::compose(result, SignedPermutation::from_permutation(id));
  }
  return result;
}

GroupAction GroupAction::axis_rotation() {
  GroupAction action;
  action.kind_ = ActionKind::axis_rotation;
  const SignedPermutation r({1, 0}, {-1, 1});
  const char* names[] = {"e", "R", "R^2", "R^3"};
  for (unsigned k = 0; k < 4; ++k)
    action.elements_.push_back({names[k], power(r, k), SignedPermutation{}, {}, {}});
  action.generators_ = {ElementId{1}};
  action.table_ = cyclic_table(4);
  action.finalize_dims();
  return action;
}

GroupAction GroupAction::axis_sign_rotation() {
  GroupAction action;
  action.kind_ = ActionKind::axis_sign_rotation;
  const SignedPermutation r({0, 1}, {-1, -1});
  const char* names[] = {"e", "R", "R^2", "R^3"};
  for (unsigned k = 0; k < 4; ++k)
    action.elements_.push_back({names[k], power(r, k), SignedPermutation{}, {}, {}});
  action.generators_ = {ElementId{1}};
  action.table_ = cyclic_table(4);
  action.finalize_dims();
  return action;
}

GroupAction GroupAction::trivial() {
  GroupAction action;
  action.kind_ = ActionKind::trivial;
  action.elements_.push_back({"e", SignedPermutation{}, SignedPermutation{}, {}, {}});
  action.elements_.push_back({"T", SignedPermutation{}, SignedPermutation{}, {}, {}});
  action.generators_ = {ElementId{1}};
  action.table_ = cyclic_table(2);
  action.finalize_dims();
  return action;
}

GroupAction GroupAction::image_d4(std::size_t side, bool equivariant_output) {
  GroupAction action;
  action.kind_ = ActionKind::image_d4;
  action.image_side_ = side;
  action.equivariant_output_ = equivariant_output;
  // Index 4*s + k holds b^s a^k.
  const char* names[] = {"e", "a", "a^2", "a^3", "b", "ba", "ba^2", "ba^3"};
  for (unsigned s = 0; s < 2; ++s) {
    for (unsigned k = 0; k < 4; ++k) {
      SignedPermutation pixels = d4_pixel_permutation(side, k, s == 1);
      SignedPermutation out = equivariant_output ? pixels : SignedPermutation{};
      action.elements_.push_back({names[4 * s + k], std::move(pixels), std::move(out), {}, {}});
    }
  }
  action.generators_ = {ElementId{1}, ElementId{4}};
  // (b^s a^k)(b^t a^l) = b^(s+t) a^((-1)^t k + l), using a^k b = b a^-k.
  action.table_.resize(64);
  for (unsigned s = 0; s < 2; ++s)
    for (unsigned k = 0; k < 4; ++k)
      for (unsigned t = 0; t < 2; ++t)
        for (unsigned l = 0; l < 4; ++l) {
          const unsigned refl = (s + t) % 2;
          const unsigned turns = ((t == 1 ? 4 - k : k) + l) % 4;
          action.table_[(4 * s + k) * 8 + (4 * t + l)] = 4 * refl + turns;
        }
  action.finalize_dims();
  return action;
}

GroupAction GroupAction::permutation(const std::vector<std::vector<std::uint32_t>>& input_generators,
                                     const std::vector<std::vector<std::uint32_t>>& output_generators) {
  if (input_generators.empty()) throw InputError("permutation action needs at least one generator");
  if (!output_generators.empty() && output_generators.size() != input_generators.size())
    throw InputError("output generators must be empty or match the input generators one-to-one");

  using Key = std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>;
  struct Pair {
    SignedPermutation in;
    SignedPermutation out;
  };
  std::vector<Pair> gens;
  for (std::size_t i = 0; i < input_generators.size(); ++i) {
    Pair p{SignedPermutation::from_permutation(input_generators[i]), SignedPermutation{}};
    if (!output_generators.empty()) p.out = SignedPermutation::from_permutation(output_generators[i]);
    gens.push_back(std::move(p));
  }
  const std::size_t in_len = std::max_element(gens.begin(), gens.end(), [](auto& a, auto& b) {
                               return a.in.size() < b.in.size();
                             })->in.size();
  std::size_t out_len = 0;
  for (const auto& g : gens) out_len = std::max(out_len, g.out.size());

  // Normalise to full length so equal maps have equal keys.
  auto normalise = [](const SignedPermutation& p, std::size_t len) {
    std::vector<std::uint32_t> id(len);
    std::iota(id.begin(), id.end(), 0u);
    return SignedPermutation::compose(p, SignedPermutation::from_permutation(id));
  };
  auto key_of = [&](const Pair& p) { return Key{p.in.source(), p.out.source()}; };

  constexpr std::size_t kMaxOrder = 100000;
  GroupAction action;
  action.kind_ = ActionKind::permutation;
  std::vector<Pair> members;
  std::map<Key, std::uint32_t> index;
  Pair identity{normalise(SignedPermutation{}, in_len), normalise(SignedPermutation{}, out_len)};
  members.push_back(identity);
  index.emplace(key_of(identity), 0);
  action.elements_.push_back({"e", identity.in, identity.out, {}, {}});

  std::vector<std::uint32_t> gen_ids;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Pair g{normalise(gens[i].in, in_len), normalise(gens[i].out, out_len)};
    auto [it, inserted] = index.emplace(key_of(g), static_cast<std::uint32_t>(members.size()));
    if (inserted) {
      members.push_back(g);
      action.elements_.push_back({"g" + std::to_string(i), g.in, g.out, {}, {}});
    }
    gen_ids.push_back(it->second);
  }
  // Breadth-first closure: left-multiply every member by every generator.
  std::deque<std::uint32_t> frontier;
  for (std::uint32_t id = 1; id < members.size(); ++id) frontier.push_back(id);
  while (!frontier.empty()) {
    const std::uint32_t cur = frontier.front();
    frontier.pop_front();
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      const Pair& g = members[gen_ids[gi]];
      Pair next{SignedPermutation::compose(g.in, members[cur].in),
                SignedPermutation::compose(g.out, members[cur].out)};
      auto [it, inserted] = index.emplace(key_of(next), static_cast<std::uint32_t>(members.size()));
      if (!inserted) continue;
      if (members.size() >= kMaxOrder) throw ConfigError("permutation group is too large");
      action.elements_.push_back({action.elements_[gen_ids[gi]].name + "*" + action.elements_[cur].name,
                                  next.in, next.out, {}, {}});
      members.push_back(std::move(next));
      frontier.push_back(it->second);
    }
  }
  for (std::uint32_t id : gen_ids) {
    if (id != 0 && std::find(action.generators_.begin(), action.generators_.end(), ElementId{id}) ==
                       action.generators_.end())
      action.generators_.push_back(ElementId{id});
  }
  if (action.generators_.empty()) throw ConfigError("all generators act as the identity");

  const std::size_t order = members.size();
  action.table_.resize(order * order);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      Pair prod{SignedPermutation::compose(members[a].in, members[b].in),
                SignedPermutation::compose(members[a].out, members[b].out)};
      action.table_[a * order + b] = index.at(key_of(prod));
    }
  }
  action.finalize_dims();
  return action;
}

GroupAction GroupAction::user(std::string name, std::vector<UserElement> elements) {
  if (elements.size() < 2) throw InputError("user action needs the identity and at least one generator");
  GroupAction action;
  action.kind_ = ActionKind::user;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto& e = elements[i];
    if (!e.input || !e.output) throw InputError("user element '" + e.name + "' is missing a map");
    action.elements_.push_back({std::move(e.name), std::nullopt, std::nullopt, std::move(e.input),
                                std::move(e.output)});
    if (i > 0) action.generators_.push_back(ElementId{static_cast<std::uint32_t>(i)});
  }
  (void)name;
  action.finalize_dims();
  return action;
}

void GroupAction::finalize_dims() {
  for (const auto& e : elements_) {
    if (e.input_perm) min_input_dim_ = std::max(min_input_dim_, e.input_perm->size());
    if (e.output_perm) min_output_dim_ = std::max(min_output_dim_, e.output_perm->size());
  }
}

const GroupAction::Element& GroupAction::element(ElementId g) const {
  if (g.value >= elements_.size()) throw InputError("unknown group element " + std::to_string(g.value));
  return elements_[g.value];
}

const std::string& GroupAction::name(ElementId g) const { return element(g).name; }

std::optional<ElementId> GroupAction::find(std::string_view name) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].name == name) return ElementId{static_cast<std::uint32_t>(i)};
  return std::nullopt;
}

ElementId GroupAction::at(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw InputError("unknown group element '" + std::string(name) + "'");
}

ElementId GroupAction::compose(ElementId outer, ElementId inner) const {
  if (!has_composition()) throw ConfigError("this action has no composition table");
  element(outer);
  element(inner);
  return ElementId{table_[outer.value * elements_.size() + inner.value]};
}

std::vector<ElementId> GroupAction::distinct_powers(ElementId g) const {
  if (g == identity()) return {};
  if (!has_composition()) return {g};
  std::vector<ElementId> powers;
  ElementId cur = g;
  while (cur != identity()) {
    if (std::find(powers.begin(), powers.end(), cur) != powers.end()) break;  // semigroup cycle
    powers.push_back(cur);
    cur = compose(g, cur);
  }
  return powers;
}

void GroupAction::apply_input(ElementId g, std::span<const double> x, std::span<double> out) const {
  const Element& e = element(g);
  if (x.size() < min_input_dim_)
    throw InputError("input dimension " + std::to_string(x.size()) + " is below the action's minimum " +
                     std::to_string(min_input_dim_));
  if (out.size() != x.size()) throw InputError("output buffer has the wrong dimension");
  if (e.input_perm) e.input_perm->apply(x, out);
  else e.input_fn(x, out);
}

Vec GroupAction::apply_input(ElementId g, std::span<const double> x) const {
  Vec out(x.size());
  apply_input(g, x, out);
  return out;
}

void GroupAction::apply_output(ElementId g, std::span<const double> y, std::span<double> out) const {
  const Element& e = element(g);
  if (y.size() < min_output_dim_)
    throw InputError("output dimension " + std::to_string(y.size()) + " is below the action's minimum " +
                     std::to_string(min_output_dim_));
  if (out.size() != y.size()) throw InputError("output buffer has the wrong dimension");
  if (e.output_perm) e.output_perm->apply(y, out);
  else e.output_fn(y, out);
}

Vec GroupAction::apply_output(ElementId g, std::span<const double> y) const {
  Vec out(y.size());
  apply_output(g, y, out);
  return out;
}

const SignedPermutation* GroupAction::input_permutation(ElementId g) const {
  const Element& e = element(g);
  return e.input_perm ? &*e.input_perm : nullptr;
}

const SignedPermutation* GroupAction::output_permutation(ElementId g) const {
  const Element& e = element(g);
  return e.output_perm ? &*e.output_perm : nullptr;
}

bool output_action_is_linear(const GroupAction& action, std::size_t output_dim, std::uint64_t seed,
                             int draws, double tolerance) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(action.size() - 1));
  const std::size_t dim = std::max(output_dim, action.min_output_dim());
  Vec y(dim), z(dim), mix(dim);
  for (int draw = 0; draw < draws; ++draw) {
    const ElementId g{pick(engine)};
    const double alpha = normal(engine);
    for (std::size_t k = 0; k < dim; ++k) {
      y[k] = normal(engine);
      z[k] = normal(engine);
      mix[k] = alpha * y[k] + z[k];
    }
    const Vec gy = action.apply_output(g, y);
    const Vec gz = action.apply_output(g, z);
    const Vec gmix = action.apply_output(g, mix);
    for (std::size_t k = 0; k < dim; ++k) {
      if (std::abs(gmix[k] - (alpha * gy[k] + gz[k])) > tolerance * (1.0 + std::abs(gmix[k])))
        return false;
    }
  }
  return true;
}

}  // namespace eqt
