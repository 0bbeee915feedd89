//! The six compiled-in reference cases, in listing order.

use crate::config::ExperimentConfig;

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "heat-1.1",
        text: "\
name = heat-1.1
description = heat equation, u0 = 0, boundary input 5 sin^3 t
equation = heat
target_length = 2
horizon = 5
eta = sin3:5
u0 = zero
bracket = 0.5, 4
init = 3
nx = 200
nt = 1000
",
    },
    Preset {
        name: "heat-1.2",
        text: "\
name = heat-1.2
description = heat equation, u0 = 5x(2 - x), boundary input 0.2t(2 + t)
equation = heat
target_length = 2
horizon = 5
eta = poly:0, 0.4, 0.2
u0 = poly:0, 10, -5
bracket = 0.2, 4
init = 0.5
nx = 200
nt = 1000
",
    },
    Preset {
        name: "heat-1.3",
        text: "\
name = heat-1.3
description = heat equation, u0 = sin(pi x/2), no boundary input; lengths 4 and 6 share the observation
equation = heat
target_length = 6
horizon = 5
eta = zero
u0 = sine:1, 0.5pi
bracket = 3, 7
init = 5.5, 4.5
nx = 400
nt = 2000
",
    },
    // Lengths above T/2 never see the reflected wave, so the cost is flat
    // there; the bracket stops just past the truth.
    Preset {
        name: "wave-2.1",
        text: "\
name = wave-2.1
description = wave equation, zero initial data, boundary input 3 sin^3 t
equation = wave
target_length = 2
horizon = 4
eta = sin3:3
u0 = zero
u1 = zero
bracket = 0.5, 2.2
init = 1.5
nx = 1600
nt = 3200
",
    },
    Preset {
        name: "wave-2.2",
        text: "\
name = wave-2.2
description = wave equation, u0 = 0.4 sin(pi x), u1 = 0, boundary input 3 sin^3 t
equation = wave
target_length = 2
horizon = 4
eta = sin3:3
u0 = sine:0.4, pi
u1 = zero
bracket = 0.5, 2.5
init = 1.5
multistart = 3
nx = 800
nt = 3200
",
    },
    // With T = 4 every length in [4, 7] gives the same observation; T = 8
    // lets the reflections tell the lengths apart.
    Preset {
        name: "wave-2.3",
        text: "\
name = wave-2.3
description = wave equation, u0 = sin(pi x/2), u1 = 0, no boundary input; lengths 4 and 6 share the observation
equation = wave
target_length = 6
horizon = 8
eta = zero
u0 = sine:1, 0.5pi
u1 = zero
bracket = 3, 7
init = 5.5, 4.5
nx = 400
nt = 4000
",
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        ExperimentConfig::from_text(self.text).expect("preset text is valid")
    }
}
