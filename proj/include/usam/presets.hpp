#pragma once

// Embedded copies of the shipped preset files, so the CLI works from any
// directory.  A unit test keeps these in sync with presets/*.toml; if you
// edit one side, mirror the other.

#include <stdexcept>
#include <string>

#include "usam/model.hpp"

namespace usam {

inline const char* const kPresetA = R"PRESET(# Preset A: monitoring-dominated mix with a sliver of slow control and no
# fast-control or safety traffic.  Durations in ms, rates in 1/s.

[system]
mu = 1000.0
v_max_ms = 1.5
lambda_s = 120.0
w1 = 0.34
w2 = 0.33
w3 = 0.33
delta_tar_ms = 150.0
sfrt_star_ms = 6.0
epsilon = 0.2
alpha = 1.37
rho_max = 0.28
s_min_ms = 0.05

[class.M]
priority = 1
c_max_ms = 0.20
deadline_ms = 80.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.95
is_monitoring = true

[class.SC]
priority = 2
c_max_ms = 0.15
deadline_ms = 20.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.05
is_monitoring = false

[class.FC]
priority = 3
c_max_ms = 0.12
deadline_ms = 8.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.0
is_monitoring = false

[class.S]
priority = 4
c_max_ms = 0.10
deadline_ms = 5.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.0
is_monitoring = false
)PRESET";

inline const char* const kPresetB = R"PRESET(# Preset B: uniform mix, every class carries a quarter of the offered
# load.  Durations in ms, rates in 1/s.

[system]
mu = 1000.0
v_max_ms = 1.5
lambda_s = 120.0
w1 = 0.34
w2 = 0.33
w3 = 0.33
delta_tar_ms = 150.0
sfrt_star_ms = 6.0
epsilon = 0.2
alpha = 1.37
rho_max = 0.28
s_min_ms = 0.05

[class.M]
priority = 1
c_max_ms = 0.20
deadline_ms = 80.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.25
is_monitoring = true

[class.SC]
priority = 2
c_max_ms = 0.15
deadline_ms = 20.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.25
is_monitoring = false

[class.FC]
priority = 3
c_max_ms = 0.12
deadline_ms = 8.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.25
is_monitoring = false

[class.S]
priority = 4
c_max_ms = 0.10
deadline_ms = 5.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.25
is_monitoring = false
)PRESET";

inline const char* const kPresetC = R"PRESET(# Preset C: representative industrial mix, monitoring-heavy with a small
# safety-critical share.  Durations in ms, rates in 1/s.

[system]
mu = 1000.0
v_max_ms = 1.5
lambda_s = 120.0
w1 = 0.34
w2 = 0.33
w3 = 0.33
delta_tar_ms = 150.0
sfrt_star_ms = 6.0
epsilon = 0.2
alpha = 1.37
rho_max = 0.28
s_min_ms = 0.05

[class.M]
priority = 1
c_max_ms = 0.20
deadline_ms = 80.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.70
is_monitoring = true

[class.SC]
priority = 2
c_max_ms = 0.15
deadline_ms = 20.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.15
is_monitoring = false

[class.FC]
priority = 3
c_max_ms = 0.12
deadline_ms = 8.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.10
is_monitoring = false

[class.S]
priority = 4
c_max_ms = 0.10
deadline_ms = 5.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.05
is_monitoring = false
)PRESET";

inline const char* const kPresetD = R"PRESET(# Preset D: control-heavy mix with an elevated safety share.  Durations
# in ms, rates in 1/s.

[system]
mu = 1000.0
v_max_ms = 1.5
lambda_s = 120.0
w1 = 0.34
w2 = 0.33
w3 = 0.33
delta_tar_ms = 150.0
sfrt_star_ms = 6.0
epsilon = 0.2
alpha = 1.37
rho_max = 0.28
s_min_ms = 0.05

[class.M]
priority = 1
c_max_ms = 0.20
deadline_ms = 80.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.50
is_monitoring = true

[class.SC]
priority = 2
c_max_ms = 0.15
deadline_ms = 20.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.25
is_monitoring = false

[class.FC]
priority = 3
c_max_ms = 0.12
deadline_ms = 8.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.10
is_monitoring = false

[class.S]
priority = 4
c_max_ms = 0.10
deadline_ms = 5.0
sfrt_ms = 6.0
gamma = 1.0
mix = 0.15
is_monitoring = false
)PRESET";

inline const char* preset_text(char which) {
  switch (which) {
    case 'A': return kPresetA;
    case 'B': return kPresetB;
    case 'C': return kPresetC;
    case 'D': return kPresetD;
    default: throw std::invalid_argument(std::string("unknown preset '") + which + "'");
  }
}

inline SystemConfig preset_config(char which) { return parse_config(preset_text(which)); }

}  // namespace usam
