#pragma once

#include "dipiir/linear_op.hpp"

#include <array>

namespace dipiir {

/// CE variable: an image vector followed by a data-domain vector, stored
/// contiguously so agents and averaging can treat it as one vector.
class AugmentedState {
 public:
  AugmentedState() = default;
  AugmentedState(const Vec& image, const Vec& data);
  AugmentedState(Index image_len, Vec values);

  static AugmentedState zeros(Index image_len, Index data_len) {
    return AugmentedState(image_len, Vec::Zero(image_len + data_len));
  }

  Index image_len() const noexcept { return image_len_; }
  Index data_len() const noexcept { return values_.size() - image_len_; }
  Index size() const noexcept { return values_.size(); }

  auto image() const { return values_.head(image_len_); }
  auto image() { return values_.head(image_len_); }
  auto data() const { return values_.tail(data_len()); }
  auto data() { return values_.tail(data_len()); }

  const Vec& values() const noexcept { return values_; }
  Vec& values() noexcept { return values_; }

  bool same_shape(const AugmentedState& other) const noexcept {
    return image_len_ == other.image_len_ && size() == other.size();
  }

  friend bool operator==(const AugmentedState& a, const AugmentedState& b) {
    return a.same_shape(b) && a.values_ == b.values_;
  }

 private:
  Index image_len_ = 0;
  Vec values_;
};

/// Index of each agent's component in the stacked state.
enum class Role : int { Sensor = 0, Data = 1, Image = 2 };

inline constexpr std::array<Role, 3> kRoles{Role::Sensor, Role::Data, Role::Image};

const char* role_name(Role r) noexcept;

/// One auxiliary state per agent (sensor, data prior, image prior).
struct StackedState {
  std::array<AugmentedState, 3> parts;

  /// All three components set to x.
  static StackedState replicate(const AugmentedState& x) { return StackedState{{x, x, x}}; }

  AugmentedState& operator[](Role r) { return parts[static_cast<std::size_t>(r)]; }
  const AugmentedState& operator[](Role r) const { return parts[static_cast<std::size_t>(r)]; }

  /// Throws ShapeError unless all components share (image_len, data_len).
  void require_consistent() const;

  friend bool operator==(const StackedState& a, const StackedState& b) { return a.parts == b.parts; }
};

}  // namespace dipiir
