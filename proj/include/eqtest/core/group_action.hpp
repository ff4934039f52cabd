#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqtest/core/dataset.hpp"

namespace eqt {

/// Index of an element inside its GroupAction.
struct ElementId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ElementId&, const ElementId&) = default;
};

/// out[k] = sign[k] * in[source[k]] for k < size(); later coordinates pass
/// through unchanged, so one permutation acts on every dimension >= size().
class SignedPermutation {
 public:
  SignedPermutation() = default;
  SignedPermutation(std::vector<std::uint32_t> source, std::vector<std::int8_t> sign);
  static SignedPermutation from_permutation(std::vector<std::uint32_t> source);

  std::size_t size() const noexcept { return source_.size(); }
  const std::vector<std::uint32_t>& source() const noexcept { return source_; }
  const std::vector<std::int8_t>& sign() const noexcept { return sign_; }

  /// `in` and `out` must not alias; in.size() == out.size() >= size().
  void apply(std::span<const double> in, std::span<double> out) const;

  /// outer ∘ inner: apply `inner` first.
  static SignedPermutation compose(const SignedPermutation& outer, const SignedPermutation& inner);

  friend bool operator==(const SignedPermutation&, const SignedPermutation&) = default;

 private:
  std::vector<std::uint32_t> source_;
  std::vector<std::int8_t> sign_;
};

enum class ActionKind { axis_rotation, axis_sign_rotation, trivial, image_d4, permutation, user };

std::string_view to_string(ActionKind kind);

using PointMap = std::function<void(std::span<const double> in, std::span<double> out)>;

/// A user-supplied element. The output map must be linear.
struct UserElement {
  std::string name;
  PointMap input;
  PointMap output;
};

/// Finite semi-group G acting on inputs (g·x) and linearly on outputs (g⋆y).
///
/// Built-in kinds store every element as a pair of signed permutations and
/// carry a Cayley table, so relations such as R^4 = e or ab = ba^-1 can be
/// checked both symbolically and by applying the maps. The abstract group may
/// act non-faithfully: under the sign-rotation kind R^2 acts as the identity
/// on inputs while still being a distinct element of Z4.
class GroupAction {
 public:
  /// Z4 = <R>, R·x = (-x2, x1, x3, ...), trivial on outputs.
  static GroupAction axis_rotation();
  /// Z4 = <R>, R⋆x = (-x1, -x2, x3, ...), trivial on outputs.
  static GroupAction axis_sign_rotation();
  /// Z2 = <T> acting trivially on both spaces.
  static GroupAction trivial();
  /// D4 = <a, b> on side×side images: a = counter-clockwise quarter turn,
  /// b = mirror across the vertical centre line. Outputs are either left
  /// alone (invariance) or transformed the same way (equivariant masks).
  static GroupAction image_d4(std::size_t side, bool equivariant_output = false);
  /// Group generated by pairs of permutations (input, output). Output lists
  /// may be empty for a trivial output action.
  static GroupAction permutation(const std::vector<std::vector<std::uint32_t>>& input_generators,
                                 const std::vector<std::vector<std::uint32_t>>& output_generators);
  /// Elements supplied directly; elements[0] must be the identity. No
  /// composition table.
  static GroupAction user(std::string name, std::vector<UserElement> elements);

  ActionKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return elements_.size(); }
  ElementId identity() const noexcept { return ElementId{0}; }
  const std::vector<ElementId>& generators() const noexcept { return generators_; }

  const std::string& name(ElementId g) const;
  std::optional<ElementId> find(std::string_view name) const;
  /// Throws InputError for unknown names.
  ElementId at(std::string_view name) const;

  bool has_composition() const noexcept { return !table_.empty(); }
  /// outer ∘ inner. Throws ConfigError when the action has no table.
  ElementId compose(ElementId outer, ElementId inner) const;
  /// g, g^2, ... up to (excluding) the first power equal to e.
  std::vector<ElementId> distinct_powers(ElementId g) const;

  std::size_t min_input_dim() const noexcept { return min_input_dim_; }
  std::size_t min_output_dim() const noexcept { return min_output_dim_; }

  void apply_input(ElementId g, std::span<const double> x, std::span<double> out) const;
  Vec apply_input(ElementId g, std::span<const double> x) const;
  void apply_output(ElementId g, std::span<const double> y, std::span<double> out) const;
  Vec apply_output(ElementId g, std::span<const double> y) const;

  /// Signed permutations behind a built-in element; nullptr for user kinds.
  const SignedPermutation* input_permutation(ElementId g) const;
  const SignedPermutation* output_permutation(ElementId g) const;

  /// Parameters needed to rebuild the action (used for report echo).
  std::size_t image_side() const noexcept { return image_side_; }
  bool equivariant_output() const noexcept { return equivariant_output_; }

 private:
  struct Element {
    std::string name;
    std::optional<SignedPermutation> input_perm;
    std::optional<SignedPermutation> output_perm;
    PointMap input_fn;
    PointMap output_fn;
  };

  GroupAction() = default;
  const Element& element(ElementId g) const;
  void finalize_dims();

  ActionKind kind_ = ActionKind::user;
  std::vector<Element> elements_;
  std::vector<ElementId> generators_;
  std::vector<std::uint32_t> table_;  // size()*size(), row = outer
  std::size_t min_input_dim_ = 0;
  std::size_t min_output_dim_ = 0;
  std::size_t image_side_ = 0;
  bool equivariant_output_ = false;
};

/// Pixel permutation for b^reflect a^quarter_turns on a side×side image.
SignedPermutation d4_pixel_permutation(std::size_t side, unsigned quarter_turns, bool reflect);

/// Checks g⋆(αy + z) = α g⋆y + g⋆z on random draws for every element.
bool output_action_is_linear(const GroupAction& action, std::size_t output_dim, std::uint64_t seed,
                             int draws, double tolerance = 1e-9);

}  // namespace eqt
