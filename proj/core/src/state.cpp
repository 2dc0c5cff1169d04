#include "dipiir/state.hpp"

#include "dipiir/error.hpp"

namespace dipiir {

AugmentedState::AugmentedState(const Vec& image, const Vec& data) : image_len_(image.size()) {
  values_.resize(image.size() + data.size());
  values_.head(image.size()) = image;
  values_.tail(data.size()) = data;
}

AugmentedState::AugmentedState(Index image_len, Vec values) : image_len_(image_len), values_(std::move(values)) {
  if (image_len_ < 0 || image_len_ > values_.size())
    throw ShapeError("AugmentedState: image length exceeds state length");
}

const char* role_name(Role r) noexcept {
  switch (r) {
    case Role::Sensor: return "sensor";
    case Role::Data: return "data";
    case Role::Image: return "image";
  }
  return "?";
}

void StackedState::require_consistent() const {
  for (const auto& p : parts)
    if (!p.same_shape(parts[0]))
      throw ShapeError("StackedState: components disagree on (image_len, data_len)");
}

}  // namespace dipiir
