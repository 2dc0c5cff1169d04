#pragma once

#include "dipiir/denoiser.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dipiir {

/// An external denoiser process. It receives one DIPT tensor on stdin and
/// must write one tensor of the same element count to stdout, then exit 0.
struct PluginSpec {
  std::string executable;
  std::vector<std::string> args;
  double timeout_s = 60.0;
  Index expected_len = 0;
  /// Shape sent to the plugin; defaults to {expected_len}.
  std::vector<std::uint64_t> shape;
};

/// Runs the plugin on `v`. Errors: PluginError (nonzero exit, stderr
/// attached), PluginTimeoutError, ProtocolError (malformed or short output).
Vec plugin_denoise(const Vec& v, const PluginSpec& spec);

Denoiser make_plugin_denoiser(const PluginSpec& spec, Domain domain);

}  // namespace dipiir
