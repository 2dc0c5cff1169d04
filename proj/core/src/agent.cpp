#include "dipiir/agent.hpp"

#include "dipiir/error.hpp"

namespace dipiir {

AugmentedState Agent::operator()(const AugmentedState& x) const {
  AugmentedState out;
  try {
    out = map_(x);
  } catch (const AgentError&) {
    throw;
  } catch (const std::exception& e) {
    throw AgentError(name_, e.what());
  }
  if (!out.same_shape(x))
    throw AgentError(name_, "output shape (" + std::to_string(out.image_len()) + "+" + std::to_string(out.data_len()) +
                                ") differs from input (" + std::to_string(x.image_len()) + "+" +
                                std::to_string(x.data_len()) + ")");
  if (touches_ == SliceTag::ImageOnly && out.data() != x.data())
    throw AgentError(name_, "image-only agent modified the data slice");
  if (touches_ == SliceTag::DataOnly && out.image() != x.image())
    throw AgentError(name_, "data-only agent modified the image slice");
  return out;
}

Agent identity_agent(std::string name) {
  return Agent(std::move(name), SliceTag::Both, [](const AugmentedState& x) { return x; });
}

const std::optional<Agent>& AgentSet::operator[](Role r) const {
  switch (r) {
    case Role::Sensor: return sensor;
    case Role::Data: return data;
    case Role::Image: break;
  }
  return image;
}

}  // namespace dipiir
