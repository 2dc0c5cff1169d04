#pragma once

#include "dipiir/state.hpp"

#include <functional>
#include <optional>
#include <string>

namespace dipiir {

/// Which slice of the augmented state an agent is allowed to change.
enum class SliceTag { Both, ImageOnly, DataOnly };

/// A named map on augmented states.
///
/// Calling an agent validates the result: the shape must be unchanged and the
/// slice outside its tag must come back bit-identical. Any failure surfaces
/// as AgentError carrying the agent's name.
class Agent {
 public:
  using Map = std::function<AugmentedState(const AugmentedState&)>;

  Agent(std::string name, SliceTag touches, Map map)
      : name_(std::move(name)), touches_(touches), map_(std::move(map)) {}

  AugmentedState operator()(const AugmentedState& x) const;

  const std::string& name() const noexcept { return name_; }
  SliceTag touches() const noexcept { return touches_; }

 private:
  std::string name_;
  SliceTag touches_;
  Map map_;
};

Agent identity_agent(std::string name = "identity");

/// The three CE agents. An empty slot behaves as the identity map and is
/// never evaluated.
struct AgentSet {
  std::optional<Agent> sensor;
  std::optional<Agent> data;
  std::optional<Agent> image;

  const std::optional<Agent>& operator[](Role r) const;
};

}  // namespace dipiir
