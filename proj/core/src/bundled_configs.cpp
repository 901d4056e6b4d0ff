#include <map>

#include "dgnn/experiment.hpp"

namespace dgnn {

namespace {

const std::map<std::string, std::string>& registry() {
  static const std::map<std::string, std::string> configs = {
      {"poisson-h16", R"([experiment]
model = poisson

[mesh]
cells = 16

[network]
family = sigmoid-1-layer
width = 2r+5

[train]
maxit = 15
tol = 1e-3
)"},
      {"helmholtz-const-dgnn", R"([experiment]
model = helmholtz
coefficient = const
omega = 4pi

[mesh]
cells = 20

[network]
family = sigmoid-1-layer
width = 2r+9

[train]
maxit = 15
tol = 1e-3
; adaptive weights overshoot on this setup
adapt_lambda = false
)"},
      {"helmholtz-const-dgtnn", R"([experiment]
model = helmholtz
coefficient = const
omega = 4pi

[mesh]
cells = 12

[network]
family = plane-wave
width = 2r+1

[init]
kind = spectral
order = 3

[train]
maxit = 15
tol = 1e-3
)"},
      {"helmholtz-var-2layer", R"([experiment]
model = helmholtz
coefficient = radial
omega = 4pi

[mesh]
cells = 12

[network]
family = sigmoid-2-layer
width = 2r+9
m1 = 7

[train]
maxit = 4
tol = 1e-6
; adaptive weights overshoot on this setup
adapt_lambda = false
)"},
      {"wave-const-dgtnn", R"([experiment]
model = wave
coefficient = const
speed = 10

[mesh]
cells = 12

[network]
family = poly-wave
width = 2r+1

[init]
kind = spectral
order = 5
; the constrained space-time form stalls at c = 10
form = spatial-cauchy

[train]
maxit = 4
tol = 1e-6
)"},
      {"wave-const-2layer", R"([experiment]
model = wave
coefficient = const
speed = 10

[mesh]
cells = 12

[network]
family = sigmoid-2-layer
width = 2r+3
m1 = 2r+3

[train]
maxit = 6
tol = 1e-6
; adaptive weights overshoot on this setup
adapt_lambda = false
)"},
      {"wave-var-2layer", R"([experiment]
model = wave
coefficient = linear

[mesh]
cells = 16

[network]
family = sigmoid-2-layer
width = 2r+3
m1 = 2r+3

[train]
maxit = 4
tol = 1e-6
)"},
  };
  return configs;
}

}  // namespace

std::vector<std::string> bundled_config_names() {
  // registry order is alphabetical; keep the listing grouped by model instead
  return {"poisson-h16",      "helmholtz-const-dgnn", "helmholtz-const-dgtnn", "helmholtz-var-2layer",
          "wave-const-dgtnn", "wave-const-2layer",    "wave-var-2layer"};
}

const std::string& bundled_config_text(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string msg = "unknown config '" + name + "'; bundled configs are:";
    for (const auto& n : bundled_config_names()) msg += " " + n;
    throw ConfigError(msg);
  }
  return it->second;
}

}  // namespace dgnn
