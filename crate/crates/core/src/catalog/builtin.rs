//! The built-in catalog. Base points are computed once (Newton's method in
//! `solve_var` from a seed) and stored in the entries.

use std::collections::BTreeMap;

use crate::expr::{EvalPoint, RealCoord};
use crate::hypersurface::find_point;

use super::{BasePoint, CatalogEntry, ExpectedLevi, Extension, ParamSpec};
use ExpectedLevi::*;

struct Builder {
    e: CatalogEntry,
    seeds: Vec<[f64; 6]>,
}

fn entry(id: &str, section: &str, equation: &str, levi: ExpectedLevi) -> Builder {
    Builder {
        e: CatalogEntry {
            id: id.into(),
            section: section.into(),
            equation: equation.into(),
            solve_var: "v".into(),
            parameters: BTreeMap::new(),
            domain: Vec::new(),
            base_point: BasePoint {
                z1: [0.0; 2],
                z2: [0.0; 2],
                w: [0.0; 2],
            },
            sample_base_points: Vec::new(),
            expected_levi: levi,
            algebra: None,
            algebra_params: BTreeMap::new(),
            frame: None,
            extension: None,
            spherical: None,
            notes: String::new(),
        },
        seeds: vec![[0.0; 6]],
    }
}

fn strings(f: &[[&str; 3]]) -> Vec<[String; 3]> {
    f.iter().map(|c| c.map(String::from)).collect()
}

fn real_seed(coords: &[(&str, f64)]) -> [f64; 6] {
    let mut r = [0.0; 6];
    for (name, x) in coords {
        r[RealCoord::from_name(name).expect("real coordinate name").index()] = *x;
    }
    r
}

impl Builder {
    fn solve(mut self, var: &str) -> Self {
        self.e.solve_var = var.into();
        self
    }

    fn param(mut self, name: &str, range: &[&str], samples: &[f64]) -> Self {
        self.e.parameters.insert(
            name.into(),
            ParamSpec {
                range: range.iter().map(|s| s.to_string()).collect(),
                samples: samples.to_vec(),
            },
        );
        self
    }

    fn domain(mut self, d: &[&str]) -> Self {
        self.e.domain = d.iter().map(|s| s.to_string()).collect();
        self
    }

    /// Newton seed shared by all samples (unnamed coordinates are 0).
    fn at(mut self, coords: &[(&str, f64)]) -> Self {
        self.seeds = vec![real_seed(coords)];
        self
    }

    /// One seed per sample, as `[x1, y1, x2, y2, u, v]`.
    fn seeds(mut self, s: &[[f64; 6]]) -> Self {
        self.seeds = s.to_vec();
        self
    }

    fn algebra(mut self, label: &str, params: &[(&str, &str)]) -> Self {
        self.e.algebra = Some(label.into());
        self.e.algebra_params = params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        self
    }

    fn frame(mut self, f: &[[&str; 3]]) -> Self {
        self.e.frame = Some(strings(f));
        self
    }

    fn extension(mut self, algebra: &str, f: &[[&str; 3]]) -> Self {
        self.e.extension = Some(Extension {
            algebra: algebra.into(),
            fields: strings(f),
        });
        self
    }

    fn spherical(mut self, s: bool) -> Self {
        self.e.spherical = Some(s);
        self
    }

    fn notes(mut self, n: &str) -> Self {
        self.e.notes = n.into();
        self
    }

    fn build(self) -> CatalogEntry {
        let mut e = self.e;
        let var = e.solve_coord().expect("solve_var");
        let mut points = Vec::new();
        for i in 0..e.sample_count() {
            let seed = match self.seeds.get(i) {
                Some(s) if i == 0 || self.seeds.len() > 1 => EvalPoint::from_real(*s),
                _ => points[i - 1],
            };
            let df = e
                .defining_function(&e.sample_params(i))
                .unwrap_or_else(|err| panic!("{}: {err}", e.id));
            let p = find_point(&df, &seed, var).unwrap_or_else(|err| panic!("{} sample {i}: {err}", e.id));
            points.push(p);
        }
        e.base_point = BasePoint::from_point(&points[0]);
        e.sample_base_points = points[1..].iter().map(BasePoint::from_point).collect();
        e
    }
}

const NONZERO_A: [&str; 4] = [
    "(A_re + 1)^2 + A_im^2 != 0",
    "A_re^2 + A_im^2 != 0",
    "(A_re - 1)^2 + A_im^2 != 0",
    "(A_re - 2)^2 + A_im^2 != 0",
];

/// The 47 types of homogeneous hypersurfaces in C³, grouped as I.1 (12),
/// I.2 (8), I.3 (Cartan type 4, quaternionic 1), I.4 (1), II.1 (6),
/// II.2 (2), III.1 (5), III.2 (7), III.3 (1). Tubes are written with `u`
/// (alias `x3`) on the left.
pub fn builtin_catalog() -> Vec<CatalogEntry> {
    let x12 = [("x1", 1.0), ("x2", 1.0)];
    let tube = |id: &str, section: &str, eq: &str, levi| entry(id, section, eq, levi).solve("u").at(&x12);
    let pm = |b: Builder| b.param("eps", &["eps^2 = 1"], &[1.0, -1.0]);
    let v = vec![
        // I.1
        tube("I.1.1", "I.1", "u = ln(x1) + alpha*ln(x2)", Nondegenerate)
            .param("alpha", &["alpha >= -1", "alpha <= 1", "alpha != 0"], &[0.5, -0.7, 1.0])
            .domain(&["x1", "x2"])
            .build(),
        tube("I.1.2", "I.1", "u = alpha*atan(x2/x1) + ln(x1^2 + x2^2)", Nondegenerate)
            .param("alpha", &["alpha >= 0"], &[0.0, 1.0, 2.5])
            .domain(&["x1"])
            .build(),
        pm(tube("I.1.3", "I.1", "u = x2^2 + eps*x1^alpha", Nondegenerate))
            .param("alpha", &["alpha != 0", "alpha != 1"], &[0.5, 3.0])
            .domain(&["x1"])
            .build(),
        pm(tube("I.1.4", "I.1", "u = x2^2 + eps*ln(x1)", Nondegenerate)).domain(&["x1"]).build(),
        pm(tube("I.1.5", "I.1", "u = x2^2 + eps*x1*ln(x1)", Nondegenerate)).domain(&["x1"]).build(),
        tube("I.1.6", "I.1", "u = x1*x2 + exp(x1)", Indefinite).build(),
        tube("I.1.7", "I.1", "u = x1*x2 + x1^alpha", Indefinite)
            .param("alpha", &[], &[0.5, 3.0, -1.0])
            .domain(&["x1"])
            .build(),
        tube("I.1.8", "I.1", "u = x1*x2 + ln(x1)", Indefinite).domain(&["x1"]).build(),
        tube("I.1.9", "I.1", "u = x1*x2 + x1*ln(x1)", Indefinite).domain(&["x1"]).build(),
        tube("I.1.10", "I.1", "u = x1*x2 + x1^2*ln(x1)", Indefinite).domain(&["x1"]).build(),
        pm(tube("I.1.11", "I.1", "x1*u = x2^2 + eps*x1*ln(x1)", Nondegenerate)).domain(&["x1"]).build(),
        entry("I.1.12", "I.1", "eps1*x1^2 + eps2*x2^2 + u^2 = 1", Nondegenerate)
            .solve("u")
            .param("eps1", &["eps1^2 = 1"], &[1.0, 1.0, -1.0])
            .param("eps2", &["eps2^2 = 1"], &[1.0, -1.0, -1.0])
            .domain(&["u"])
            .at(&[("x1", 0.3), ("x2", 0.2), ("u", 0.9)])
            .notes("sheet u > 0")
            .build(),
        // I.2
        tube("I.2.1", "I.2", "u = (1 + exp(2*x1))*(x2 + ln(1 + exp(2*x1)))", Nondegenerate).build(),
        tube("I.2.2", "I.2", "u = x1*x2 + x1^3*ln(x1)", Indefinite).domain(&["x1"]).build(),
        tube("I.2.3", "I.2", "u = x2*exp(x1) + exp(alpha*x1)", Indefinite)
            .param("alpha", &["alpha != -1", "alpha != 0", "alpha != 1", "alpha != 2"], &[0.5, 3.0, -2.0])
            .build(),
        entry("I.2.4", "I.2", "u*cos(x1) + x2*sin(x1) = exp(alpha*x1)", Nondegenerate)
            .solve("u")
            .param("alpha", &["alpha >= 0"], &[0.0, 1.0, 2.5])
            .domain(&["cos(x1) - 0.1"])
            .at(&[("x1", 0.3), ("x2", 0.5), ("u", 1.0)])
            .notes("base point away from zeros of cos x1")
            .build(),
        tube("I.2.5", "I.2", "u = x1*exp(x2) + x1^2", Nondegenerate).build(),
        tube("I.2.6", "I.2", "u = alpha*ln(1 + exp(2*x1)) + ln(x2)", Nondegenerate)
            .param("alpha", &["alpha >= -1", "alpha <= 1", "alpha != 0"], &[0.5, -1.0, 1.0])
            .domain(&["x2"])
            .build(),
        tube("I.2.7", "I.2", "u = alpha*ln(1 + exp(2*x1)) + ln(1 + exp(2*x2))", Nondegenerate)
            .param("alpha", &["alpha >= -1", "alpha <= 1", "alpha != 0"], &[0.5, -1.0, 1.0])
            .build(),
        pm(tube("I.2.8", "I.2", "u = x2^2 + eps*ln(1 + exp(2*x1))", Nondegenerate)).build(),
        // I.3, affine chart ξ0 = 1 of the Cartan quadric pencils
        entry(
            "I.3.1",
            "I.3",
            "1 + abs2(z1) + abs2(z2) + abs2(w) = a*abs(1 + z1^2 + z2^2 + w^2)",
            Nondegenerate,
        )
        .param("a", &["a > 1"], &[2.0, 5.0])
        .seeds(&[[0.2, 0.1, 0.3, -0.2, 0.1, -1.82], [0.2, 0.1, 0.3, -0.2, 0.1, -1.24]])
        .notes("affine chart xi0 = 1")
        .build(),
        entry(
            "I.3.2",
            "I.3",
            "1 + abs2(z1) + abs2(z2) - abs2(w) = a*abs(1 + z1^2 + z2^2 - w^2)",
            Nondegenerate,
        )
        .param("a", &["a > 0", "a != 1"], &[0.5, 2.0])
        .seeds(&[[-1.371, 0.209, 1.266, 0.055, -0.345, -1.212], [0.239, 0.324, 0.144, -1.131, 0.47, -0.894]])
        .notes("affine chart xi0 = 1")
        .build(),
        entry(
            "I.3.3",
            "I.3",
            "1 - abs2(z1) - abs2(z2) - abs2(w) = a*abs(1 - z1^2 - z2^2 - w^2)",
            Nondegenerate,
        )
        .param("a", &["a > 0", "a < 1"], &[0.5, 0.8])
        .seeds(&[[0.2, 0.1, 0.3, -0.2, 0.1, -0.49], [0.2, 0.1, 0.3, -0.2, 0.1, -0.21]])
        .notes("affine chart xi0 = 1")
        .build(),
        entry(
            "I.3.4",
            "I.3",
            "1 + abs2(z1) - abs2(z2) - abs2(w) = a*abs(1 + z1^2 - z2^2 - w^2)",
            Nondegenerate,
        )
        .param("a", &["a > 0", "a != 1"], &[0.5, 2.0])
        .seeds(&[[0.906, 1.033, -0.135, 0.831, -1.054, -0.753], [0.171, -1.315, 0.131, 0.543, -0.755, 0.705]])
        .notes("affine chart xi0 = 1")
        .build(),
        entry(
            "I.3.Q",
            "I.3",
            "Im(z2 + conj(z1)*w) = gamma*sqrt(Re(z2 + conj(z1)*w)^2 + abs2(w - z1*z2))",
            Nondegenerate,
        )
        .solve("y2")
        .param("gamma", &["gamma != 0"], &[1.0, -0.5, 2.0])
        .at(&[("x1", 0.3), ("y1", 0.2), ("x2", 0.5), ("y2", 0.6), ("u", 0.4), ("v", -0.1)])
        .notes("quaternionic model in the affine chart xi1 = 1 with (xi2, xi3, xi4) = (z1, z2, w)")
        .build(),
        // I.4
        entry(
            "I.4",
            "I.4",
            "v = z1*conj(z2) + z2*conj(z1) + exp((A_re + i*A_im)*ln(z1) + (A_re - i*A_im)*ln(conj(z1)))",
            Indefinite,
        )
        .param("A_re", &NONZERO_A, &[0.5, 3.0, -0.5])
        .param("A_im", &[], &[1.0, 0.5, 0.0])
        .domain(&["x1"])
        .at(&[("x1", 1.0), ("v", 1.0)])
        .notes("|z1^A|^2 written as exp(A ln z1 + conj(A) ln conj(z1)); A = 2 gives the Winkelmann surface")
        .build(),
        // II.1
        tube("II.1.1", "II.1", "u = x1^alpha*x2^beta", Nondegenerate)
            .param("alpha", &["alpha != 0", "abs(alpha) <= abs(beta)", "alpha + beta != 1"], &[0.3, -0.5, 0.5])
            .param("beta", &["abs(beta) <= 1"], &[0.5, 1.0, -0.8])
            .domain(&["x1", "x2"])
            .algebra("g5_33", &[])
            .build(),
        tube("II.1.2", "II.1", "u = (x1^2 + x2^2)^alpha*exp(beta*atan(x2/x1))", Nondegenerate)
            .param("alpha", &["alpha != 0.5"], &[0.3, 1.0, -0.5])
            .param("beta", &["beta >= 0", "(alpha - 1)^2 + beta^2 != 0"], &[0.0, 1.0, 2.0])
            .domain(&["x1"])
            .algebra("g5_35", &[])
            .build(),
        tube("II.1.3", "II.1", "u = x1*(alpha*ln(x1) + ln(x2))", Nondegenerate)
            .param("alpha", &["alpha != -1", "alpha != 0"], &[0.5, -2.0, 1.0])
            .domain(&["x1", "x2"])
            .algebra("g5_34", &[])
            .build(),
        entry("II.1.4", "II.1", "(u - 3*x1*x2 + 2*x1^3)^2 = alpha*(x1^2 - x2)^3", Nondegenerate)
            .solve("u")
            .param("alpha", &["alpha != 0", "alpha != 4"], &[1.0, 6.0, 0.5])
            .domain(&["alpha*(x1^2 - x2)"])
            .at(&[("x1", 0.2), ("x2", -1.0), ("u", 1.0)])
            .algebra("g5_30", &[("h", "0")])
            .notes("branch u - 3*x1*x2 + 2*x1^3 > 0")
            .build(),
        pm(entry("II.1.5", "II.1", "x1*u = x2^2 + eps*x1^alpha", Nondegenerate).solve("u").at(&x12))
            .param("alpha", &["alpha != 0", "alpha != 1", "alpha != 2"], &[0.5, 3.0])
            .domain(&["x1"])
            .algebra("g5_30", &[])
            .build(),
        pm(entry("II.1.6", "II.1", "x1*u = x2^2 + eps*x1^2*ln(x1)", Nondegenerate).solve("u").at(&x12))
            .domain(&["x1"])
            .algebra("g5_32", &[("h", "eps")])
            .build(),
        // II.2
        pm(entry("II.2.1", "II.2", "v*(1 + eps*y2*x2) = y1*y2", Indefinite))
            .domain(&["1 + eps*y2*x2"])
            .at(&[("y1", 1.0), ("x2", 0.2), ("y2", 1.0), ("v", 1.0)])
            .algebra("g5_32", &[("h", "0")])
            .notes("normal form of antitube type 6")
            .build(),
        entry("II.2.2", "II.2", "(v - x2*y1)^2 + y1^2*y2^2 = y1", Indefinite)
            .domain(&["y1"])
            .at(&[("y1", 1.0), ("x2", 0.2), ("y2", 0.3), ("v", 1.0)])
            .algebra("g5", &[])
            .frame(&[
                ["1", "0", "0"],
                ["2*z1", "-z2", "w"],
                ["-z1^2", "z1*z2 - w", "-z1*w"],
                ["0", "1", "z1"],
                ["0", "0", "1"],
            ])
            .notes("normal form of general type 1")
            .build(),
        // III.1
        entry("III.1.1", "III.1", "x1^2 + x2^2 = u^2", Degenerate)
            .solve("u")
            .domain(&["u"])
            .at(&[("x1", 0.6), ("x2", 0.8), ("u", 1.0)])
            .notes("tube over the cone, sheet u > 0")
            .build(),
        tube("III.1.2", "III.1", "u = sqrt(x1^2 + x2^2)*exp(omega*atan(x2/x1))", Degenerate)
            .param("omega", &["omega > 0"], &[0.5, 2.0])
            .domain(&["x1"])
            .build(),
        tube("III.1.3", "III.1", "u = x1*(ln(x2) - ln(x1))", Degenerate).domain(&["x1", "x2"]).build(),
        tube("III.1.4", "III.1", "u = x1^(1 - theta)*x2^theta", Degenerate)
            .param("theta", &[], &[0.3, -0.5, 2.0])
            .domain(&["x1", "x2"])
            .build(),
        entry("III.1.5", "III.1", "(u - 3*x1*x2 + 2*x1^3)^2 = 4*(x1^2 - x2)^3", Degenerate)
            .solve("u")
            .domain(&["x1^2 - x2"])
            .at(&[("x1", 0.2), ("x2", -1.0), ("u", 2.0)])
            .build(),
        // III.2: C times a surface in C²(z1, z2); w is free
        entry("III.2.1", "III.2", "x2 = x1^s", Degenerate)
            .solve("x2")
            .param("s", &["s > -1", "s < 1", "s != 0", "s != 0.5"], &[-0.5, 0.3, 0.7])
            .domain(&["x1"])
            .at(&x12)
            .build(),
        entry("III.2.2", "III.2", "x2 = ln(x1)", Degenerate).solve("x2").domain(&["x1"]).at(&x12).build(),
        entry("III.2.3", "III.2", "x2 = x1*ln(x1)", Degenerate).solve("x2").domain(&["x1"]).at(&x12).build(),
        entry("III.2.4", "III.2", "sqrt(x1^2 + x2^2) = exp(a*atan(x2/x1))", Degenerate)
            .solve("x1")
            .param("a", &["a >= 0"], &[0.0, 1.0])
            .domain(&["x1"])
            .at(&[("x1", 1.0), ("x2", 0.2)])
            .notes("logarithmic spiral r = exp(a*phi)")
            .build(),
        entry("III.2.5", "III.2", "1 + abs2(z1) + abs2(z2) = a*abs(1 + z1^2 + z2^2)", Degenerate)
            .solve("y1")
            .param("a", &["a > 1"], &[2.0, 4.0])
            .seeds(&[[0.2, -1.74, 0.3, -0.2, 0.1, 0.0], [0.2, -1.15, 0.3, -0.2, 0.1, 0.0]])
            .build(),
        entry("III.2.6", "III.2", "1 + abs2(z1) - abs2(z2) = a*abs(1 + z1^2 - z2^2)", Degenerate)
            .solve("y1")
            .param("a", &["a > 1"], &[2.0, 4.0])
            .seeds(&[[0.2, -1.66, 0.3, -0.2, 0.1, 0.0], [0.2, -1.21, 0.3, -0.2, 0.1, 0.0]])
            .build(),
        entry("III.2.7", "III.2", "abs2(z1) + abs2(z2) - 1 = a*abs(z1^2 + z2^2 - 1)", Degenerate)
            .solve("y1")
            .param("a", &["a != 0", "abs(a) < 1"], &[0.5, -0.5])
            .seeds(&[[0.2, -1.63, 0.3, -0.2, 0.1, 0.0], [0.2, -0.49, 0.3, -0.2, 0.1, 0.0]])
            .build(),
        // III.3
        entry("III.3", "III.3", "v = 0", Degenerate).notes("real hyperplane").build(),
    ];
    debug_assert_eq!(v.len(), 47);
    v
}

/// Surfaces that carry explicit frames or serve as reference points: the
/// orbits of the realized solvable and reductive algebras, the quadrics, the
/// Winkelmann surface, and the two surfaces related by the sl(2)+g2 map.
pub fn companion_surfaces() -> Vec<CatalogEntry> {
    let c = "companion";
    vec![
        entry("quadric.definite", c, "v = abs2(z1) + abs2(z2)", Definite)
            .spherical(true)
            .build(),
        entry("quadric.indefinite", c, "v = abs2(z1) - abs2(z2)", Indefinite)
            .spherical(true)
            .build(),
        entry("winkelmann", c, "v = z1*conj(z2) + z2*conj(z1) + abs2(z1)^2", Indefinite)
            .spherical(false)
            .build(),
        entry("su2g2.orbit", c, "v*cosh(x1) - x2*sinh(x1) = alpha*abs(z2)", Nondegenerate)
            .param("alpha", &["alpha > 0"], &[0.5, 2.0])
            .domain(&["abs2(z2) - 0.01"])
            .at(&[("x1", 0.3), ("x2", 1.0), ("y2", 0.2), ("v", 1.0)])
            .algebra("su2_g2", &[])
            .frame(&[
                ["cosh(z1)", "z2*sinh(z1)", "i*z2*cosh(z1)"],
                ["-i*sinh(z1)", "-i*z2*cosh(z1)", "z2*sinh(z1)"],
                ["-i", "0", "0"],
                ["0", "0", "1"],
                ["0", "z2", "w"],
            ])
            .extension("su2_sl2", &[["2*i*z2", "2*z2*w", "w^2 - z2^2"]])
            .notes("frame and sixth field written in the coordinates of this equation")
            .build(),
        entry("sl2g2.orbit", c, "v*y1 + x2 = alpha*abs(z2)", Nondegenerate)
            .param("alpha", &["alpha > 0", "alpha != 1"], &[0.5, 2.0])
            .domain(&["abs2(z2) - 0.01", "y1"])
            .at(&[("y1", 1.0), ("x2", 0.5), ("y2", 0.7), ("v", 0.3)])
            .algebra("sl2_g2", &[])
            .build(),
        entry(
            "cartan.quartic",
            c,
            "1 - abs2(z1) - abs2(z2) + abs2(w) = alpha*abs(1 - z1^2 - z2^2 + w^2)",
            Nondegenerate,
        )
        .param("alpha", &["alpha > 0", "alpha != 1"], &[0.5, 2.0])
        .seeds(&[[-1.062, -1.226, 0.273, -0.097, -0.974, -1.137], [0.056, 0.199, 0.228, -0.059, 0.479, -0.88]])
        .build(),
        entry(
            "g5_35.orbit",
            c,
            "v*sin(lambda*y2) - eps*y1*cos(lambda*y2) = exp(x2 + alpha*eps*y2)",
            Nondegenerate,
        )
        .param("alpha", &[], &[0.5, 1.0, 0.3])
        .param("lambda", &["lambda != 0"], &[-1.0, 2.0, 0.5])
        .param("eps", &["eps = 1"], &[1.0, 1.0, 1.0])
        .domain(&["abs(sin(lambda*y2)) - 0.1"])
        .at(&[("y2", 1.2), ("v", 1.0)])
        .algebra("g5_35", &[("alpha", "alpha"), ("beta", "1 - lambda")])
        .frame(&[
            ["exp(lambda*z2)", "0", "i*eps*exp(lambda*z2)"],
            ["1", "0", "0"],
            ["0", "0", "1"],
            ["z1", "1", "w"],
            ["w", "(i*eps - alpha)/lambda", "-z1"],
        ])
        .extension("g5_35_ext", &[["exp(-lambda*z2)", "0", "-i*exp(-lambda*z2)"]])
        .build(),
        entry("g5_35.orbit.neg", c, "v*sin(lambda*y2) - eps*y1*cos(lambda*y2) = exp(x2 + alpha*eps*y2)", Nondegenerate)
            .param("alpha", &[], &[0.5, 1.0, 0.3])
            .param("lambda", &["lambda != 0"], &[-1.0, 2.0, 0.5])
            .param("eps", &["eps = -1"], &[-1.0, -1.0, -1.0])
            .domain(&["abs(sin(lambda*y2)) - 0.1"])
            .at(&[("y2", 1.2), ("v", 1.0)])
            .algebra("g5_35", &[("alpha", "alpha"), ("beta", "1 - lambda")])
            .frame(&[
                ["exp(lambda*z2)", "0", "i*eps*exp(lambda*z2)"],
                ["1", "0", "0"],
                ["0", "0", "1"],
                ["z1", "1", "w"],
                ["w", "(i*eps - alpha)/lambda", "-z1"],
            ])
            .notes("the sixth field exp(-lambda*z2)*(1, 0, -i) is tangent only for eps = 1")
            .build(),
        entry("g5_35.normal", c, "v*sin(y2) - y1*cos(y2) = exp(m*x2 + n*y2)", Nondegenerate)
            .param("m", &["m != 0", "(m^2 - 1)^2 + n^2 != 0"], &[2.0, -1.0, 0.5])
            .param("n", &["n >= 0"], &[0.0, 0.5, 0.5])
            .domain(&["sin(y2) - 0.1"])
            .at(&[("y2", std::f64::consts::FRAC_PI_2), ("v", 1.0)])
            .algebra("g5_35", &[("alpha", "n/m"), ("beta", "1 - 1/m")])
            .frame(&[
                ["exp(z2)", "0", "i*exp(z2)"],
                ["1", "0", "0"],
                ["0", "0", "1"],
                ["z1", "1/m", "w"],
                ["w", "i - n/m", "-z1"],
            ])
            .extension("g5_35_ext", &[["exp(-z2)", "0", "-i*exp(-z2)"]])
            .spherical(false)
            .notes("frame rescaled to these coordinates (z2 stretched by 1/m); m = 0 needs a different frame")
            .build(),
        entry(
            "g5_35.special",
            c,
            "v*sin(y2) - lambda*eps*y1*cos(y2) = -exp(x2)*((lambda*eps/4)*(c1*(sin(2*y2) - 2*y2) + c2*cos(2*y2)) + D)",
            Nondegenerate,
        )
        .param("lambda", &["lambda^2 = 1"], &[1.0, -1.0, 1.0, -1.0])
        .param("eps", &["eps^2 = 1"], &[1.0, 1.0, -1.0, -1.0])
        .param("c1", &[], &[0.7, 0.7, -0.5, 0.6])
        .param("c2", &[], &[0.3, -0.4, 0.3, 0.2])
        .param("D", &[], &[0.5, 0.2, 0.4, 0.3])
        .domain(&["sin(y2) - 0.1"])
        .at(&[("y2", 1.0), ("v", 1.0)])
        .algebra("g5_35", &[("alpha", "0"), ("beta", "1 - lambda")])
        .frame(&[
            ["exp(lambda*z2)", "0", "i*eps*exp(lambda*z2)"],
            ["1", "0", "0"],
            ["0", "0", "1"],
            ["z1", "1", "w"],
            ["w", "i*lambda*eps", "-z1 + (c1 + i*c2)*exp(z2)"],
        ])
        .spherical(true)
        .notes("equivalent to g5_35.spherical.a (c1 = 0) or g5_35.spherical.b")
        .build(),
        entry("g5_35.spherical.a", c, "v*y2 + y1*x2 = 0", Nondegenerate)
            .domain(&["x2", "y2"])
            .at(&[("y1", 0.5), ("x2", 1.0), ("y2", 0.8), ("v", 0.0)])
            .algebra("g5_35", &[("alpha", "0"), ("beta", "0")])
            .frame(&[
                ["-z2", "0", "i*z2"],
                ["-1", "0", "0"],
                ["0", "0", "1"],
                ["z1", "z2", "w"],
                ["-w", "i*z2", "z1"],
            ])
            .spherical(true)
            .notes("affine frame found for this orbit")
            .build(),
        entry("g5_35.spherical.b", c, "v*y2 + y1*x2 = abs2(z2)*arg(z2)", Nondegenerate)
            .domain(&["x2", "y2"])
            .at(&[("y1", 0.5), ("x2", 1.0), ("y2", 0.8), ("v", 0.0)])
            .algebra("g5_35", &[("alpha", "0"), ("beta", "0")])
            .frame(&[
                ["-z2", "0", "i*z2"],
                ["-1", "0", "0"],
                ["0", "0", "1"],
                ["z1", "z2", "w"],
                ["-w + i*z2", "i*z2", "z1 + z2"],
            ])
            .spherical(true)
            .notes("affine frame found for this orbit")
            .build(),
        entry("g5_36.orbit", c, "v = (y1 - b)*x2 - a*y2 + D*y1*y2", Indefinite)
            .param("a", &[], &[0.0, 0.3, -0.5])
            .param("b", &[], &[1.0, 0.7, 0.2])
            .param("D", &[], &[0.7, 1.0, -1.0])
            .at(&[("y1", 0.5), ("x2", 0.4), ("y2", 0.3)])
            .algebra("g5_36", &[])
            .frame(&[
                ["0", "0", "1"],
                ["1", "0", "0"],
                ["0", "1", "z1 - (a + i*b)"],
                ["z1", "0", "w + (a + i*b)*z2"],
                ["-z1", "z2", "-(a + i*b)*z2"],
            ])
            .spherical(true)
            .build(),
        entry("g5_37.orbit1", c, "v = x2*(y1 - b) - a*y2 + N*(y1^2 + y2^2)", Nondegenerate)
            .param("a", &[], &[0.0, 0.4])
            .param("b", &[], &[1.0, -0.6])
            .param("N", &["N != 0"], &[0.8, -1.5])
            .at(&[("y1", 0.5), ("x2", 0.4), ("y2", 0.3)])
            .algebra("g5_37", &[])
            .frame(&[
                ["0", "0", "1"],
                ["1", "0", "0"],
                ["0", "1", "z1 - (a + i*b)"],
                ["z1", "z2", "2*w + (a + i*b)*z2"],
                ["z2", "-z1", "(z2^2 - z1^2)/2 + (a + i*b)*z1"],
            ])
            .spherical(true)
            .build(),
        entry(
            "g5_37.orbit2",
            c,
            "v = y1^2/(2*a2) + N*abs2(z2)*exp(-2*(b1/b2)*atan(y2/x2))",
            Nondegenerate,
        )
        .param("a2", &["a2^2 = 1"], &[1.0, -1.0, 1.0])
        .param("b1", &[], &[0.3, -0.5, 0.0])
        .param("b2", &["b2 != 0"], &[1.0, 0.7, -2.0])
        .param("N", &["N != 0"], &[0.8, 1.2, -0.5])
        .domain(&["x2"])
        .at(&[("y1", 0.5), ("x2", 1.0), ("y2", 0.3)])
        .algebra("g5_37", &[])
        .frame(&[
            ["0", "0", "1"],
            ["1", "0", "0"],
            ["i*a2", "0", "z1"],
            ["z1", "z2", "2*w"],
            ["-i*a2*z1", "(b1 + i*b2)*z2", "-z1^2/2"],
        ])
        .spherical(true)
        .build(),
    ]
}

/// [`builtin_catalog`] followed by [`companion_surfaces`].
pub fn full_catalog() -> Vec<CatalogEntry> {
    let mut v = builtin_catalog();
    v.extend(companion_surfaces());
    v
}
