#![allow(dead_code)]

//! Property checkers shared by the property suite and the acceptance suite.
//! Each checker draws its own inputs from a seeded generator and returns a
//! description of the first failure.

use orbital_core::endoscopy::TransferFactor;
use orbital_core::fan::{Fan, TorusDivisor};
use orbital_core::field::{rat, Rational};
use orbital_core::linalg::{sparse_from_entries, SparseMap};
use orbital_core::rootdata::{Levi, RootDatum};
use orbital_core::springer::{SpringerModule, SymAlgebra, ValuationProfile};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Check = Result<(), String>;

/// A property checker driven by a seeded generator.
pub type Checker = fn(&mut rand_chacha::ChaCha8Rng) -> Check;

/// Groups used for fan-level properties.
pub fn fan_groups() -> Vec<RootDatum> {
    vec![
        RootDatum::sl(2),
        RootDatum::sl(3),
        RootDatum::sl(4),
        RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]),
        RootDatum::product(&[RootDatum::torus(1), RootDatum::sl(2)]),
    ]
}

fn random_fan<R: Rng>(rng: &mut R) -> Fan {
    let groups = fan_groups();
    let datum = groups.choose(rng).expect("nonempty");
    let levis = datum.enumerate_levis();
    let levi = levis.choose(rng).expect("at least the torus");
    Fan::new(datum, levi)
}

fn random_divisor<R: Rng>(rng: &mut R, fan: &Fan, bound: i64) -> TorusDivisor {
    let values: Vec<i64> = (0..fan.num_rays()).map(|_| rng.gen_range(-bound..=bound)).collect();
    TorusDivisor::from_integers(&values)
}

/// Face and intersection closure of the cone set, and adjacent chambers
/// sharing all rays but one.
pub fn fan_axioms<R: Rng>(rng: &mut R) -> Check {
    let fan = random_fan(rng);
    fan.verify_axioms().map_err(|e| e.to_string())?;
    for adj in fan.adjacencies() {
        let first = fan.chamber_rays(adj.first);
        let second = fan.chamber_rays(adj.second);
        let shared = first.iter().filter(|s| second.contains(s)).count();
        if shared + 1 != first.len() || !first.contains(&adj.first_ray) || second.contains(&adj.first_ray) {
            return Err(format!("chambers {} and {} are not adjacent", adj.first, adj.second));
        }
    }
    Ok(())
}

/// `D ↦ (μ_P^D) ↦ D` and the family it produces is orthogonal.
pub fn divisor_family_round_trip<R: Rng>(rng: &mut R) -> Check {
    let fan = random_fan(rng);
    let divisor = random_divisor(rng, &fan, 4);
    let family = fan.divisor_to_family(&divisor);
    let back = fan.family_to_divisor(&family).map_err(|e| e.to_string())?;
    if back != divisor {
        return Err(format!("{divisor:?} came back as {back:?}"));
    }
    if fan.divisor_to_family(&back) != family {
        return Err("family changed on the second pass".into());
    }
    Ok(())
}

fn positive_divisor<R: Rng>(rng: &mut R, fan: &Fan) -> TorusDivisor {
    let rank = fan.datum().rank();
    let mut divisor = TorusDivisor::zero(fan.num_rays());
    for _ in 0..rng.gen_range(1..=3) {
        let lambda: Vec<i64> = (0..rank).map(|_| rng.gen_range(-3..=3)).collect();
        let family = fan.dominant_family(&lambda);
        let d_lambda = fan.family_to_divisor(&family).expect("dominant families are orthogonal");
        divisor = divisor.add(&d_lambda);
    }
    let shift: Vec<i64> = (0..rank).map(|_| rng.gen_range(-2..=2)).collect();
    divisor.add(&fan.divisor_of_cocharacter(&shift))
}

/// For positive divisors the halfspace polytope is the hull of the `μ_P^D`.
pub fn hull_equals_halfspaces<R: Rng>(rng: &mut R) -> Check {
    let groups = [
        RootDatum::sl(2),
        RootDatum::sl(3),
        RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]),
    ];
    let datum = groups.choose(rng).expect("nonempty");
    let fan = Fan::new(datum, &Levi::torus());
    let divisor = positive_divisor(rng, &fan);
    let regularity = fan.regularity(&fan.divisor_to_family(&divisor)).map_err(|e| e.to_string())?;
    if !regularity.positive {
        return Err(format!("{divisor:?} built from dominant families is not positive"));
    }
    let polytope = fan.polytope(&divisor);
    let bound = divisor
        .to_integers()
        .ok_or("dominant divisors of cocharacters are integral")?
        .iter()
        .map(|n| n.abs())
        .max()
        .unwrap_or(0)
        + 1;
    for _ in 0..8 {
        let den = rng.gen_range(1..=4);
        let point: Vec<Rational> = (0..datum.rank()).map(|_| rat(rng.gen_range(-bound * den..=bound * den), den)).collect();
        if polytope.contains(&point) != polytope.hull_contains(&point) {
            return Err(format!("{point:?} separates the hull of {divisor:?} from its halfspaces"));
        }
    }
    for v in &polytope.vertices {
        if !polytope.contains(v) {
            return Err(format!("vertex {v:?} violates a halfspace"));
        }
    }
    Ok(())
}

/// A random Springer module with `X_*(S) = 0` on SL(2), SL(2)² or SL(3).
fn random_module<R: Rng>(rng: &mut R) -> SpringerModule {
    let pick = rng.gen_range(0..10);
    let (datum, bound, max_val) = match pick {
        0..=4 => (RootDatum::sl(2), 4, 3),
        5..=7 => (RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]), 2, 2),
        _ => (RootDatum::sl(3), 1, 1),
    };
    let fan = Fan::new(&datum, &Levi::torus());
    let profile =
        ValuationProfile::new(&datum, (0..datum.num_positive()).map(|_| rng.gen_range(0..=max_val)).collect()).expect("one value per positive root");
    let divisor = random_divisor(rng, &fan, bound);
    let roots: Vec<usize> = datum.positive_roots().collect();
    SpringerModule::new(&fan, &divisor, &profile, &roots).expect("X_*(S) = 0 for M = T")
}

/// `Σ_n b_{2n}` equals the number of torus-fixed points, the Euler
/// characteristic; with even degrees only, odd-degree homology vanishes.
pub fn odd_degree_vanishing<R: Rng>(rng: &mut R) -> Check {
    let module = random_module(rng);
    let table = module.ordinary_homology().map_err(|e| e.to_string())?;
    let fan = module.fan();
    let divisor = TorusDivisor::from_integers(module.divisor());
    let fixed = fan
        .polytope(&divisor)
        .lattice_points(&fan.quotient_lattice_basis())
        .map_err(|e| e.to_string())?
        .len();
    if table.total() != fixed {
        return Err(format!("Σ b = {} but {} fixed points", table.total(), fixed));
    }
    if table.trace_poly.iter().map(|c| *c as usize).sum::<usize>() != fixed {
        return Err("split trace polynomial disagrees with the Betti numbers".into());
    }
    Ok(())
}

/// `b_{2n} = 0` for `n > Σ_{α > 0} prof(α)`.
pub fn dimension_bound<R: Rng>(rng: &mut R) -> Check {
    let module = random_module(rng);
    let table = module.ordinary_homology().map_err(|e| e.to_string())?;
    let bound = module.profile().total(module.subsystem()) as usize;
    match table.betti.iter().rposition(|b| *b != 0) {
        Some(top) if top > bound => Err(format!("b_{} ≠ 0 above the bound {bound}", 2 * top)),
        _ => Ok(()),
    }
}

/// `R_{α,d} = R_{−α,d}` as subspaces of `Γ(D) ⊗ 𝒮_n`.
pub fn relation_symmetry<R: Rng>(rng: &mut R) -> Check {
    let module = random_module(rng);
    let datum = module.fan().datum().clone();
    let roots: Vec<usize> = datum.positive_roots().filter(|&a| module.profile().value(a) > 0).collect();
    let Some(&alpha) = roots.choose(rng) else {
        return Ok(());
    };
    let d = rng.gen_range(1..=module.profile().value(alpha) as usize);
    let n = rng.gen_range(0..=3);
    let plus = module.relation_space(alpha, d, n).map_err(|e| e.to_string())?;
    let minus = module.relation_space(datum.negative(alpha), d, n).map_err(|e| e.to_string())?;
    if plus.contains_subspace(&minus) && minus.contains_subspace(&plus) {
        Ok(())
    } else {
        Err(format!("R_{{α,{d}}} ≠ R_{{−α,{d}}} for root {alpha} in degree {n}"))
    }
}

fn same_map(a: &SparseMap<Rational>, b: &SparseMap<Rational>) -> bool {
    a.source_dim == b.source_dim
        && a.target_dim == b.target_dim
        && a.columns
            .iter()
            .zip(&b.columns)
            .all(|(x, y)| sparse_from_entries(x.clone()) == sparse_from_entries(y.clone()))
}

/// `Δ_{H″}^{H′} ∘ Δ_{H′}^H = Δ_{H″}^H` on `𝒮_n` for nested subsystems.
pub fn delta_composition<R: Rng>(rng: &mut R) -> Check {
    let groups = [
        RootDatum::sl(2),
        RootDatum::sl(3),
        RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]),
    ];
    let datum = groups.choose(rng).expect("nonempty");
    let profile =
        ValuationProfile::new(datum, (0..datum.num_positive()).map(|_| rng.gen_range(0..=2)).collect()).expect("one value per positive root");
    let large: Vec<usize> = datum.positive_roots().filter(|_| rng.gen_bool(0.8)).collect();
    let middle: Vec<usize> = large.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    let small: Vec<usize> = middle.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    let outer = TransferFactor::new(&large, &middle, &profile).map_err(|e| e.to_string())?;
    let inner = TransferFactor::new(&middle, &small, &profile).map_err(|e| e.to_string())?;
    let whole = TransferFactor::new(&large, &small, &profile).map_err(|e| e.to_string())?;
    if outer.degree + inner.degree != whole.degree {
        return Err("degrees do not add".into());
    }
    let sym = SymAlgebra::new(datum.rank());
    let n = whole.degree + rng.gen_range(0..=2);
    let composite = inner.on_sym(datum, &sym, n - outer.degree).compose(&outer.on_sym(datum, &sym, n));
    let direct = whole.on_sym(datum, &sym, n);
    if same_map(&composite, &direct) {
        Ok(())
    } else {
        Err(format!("composition fails for {large:?} ⊇ {middle:?} ⊇ {small:?} in degree {n}"))
    }
}

/// The named property checkers, in the order they are reported.
pub const PROPERTIES: [(&str, Checker); 7] = [
    ("fan axioms", fan_axioms),
    ("divisor/family round-trip", divisor_family_round_trip),
    ("hull = halfspaces under positivity", hull_equals_halfspaces),
    ("odd-degree vanishing", odd_degree_vanishing),
    ("dimension bound", dimension_bound),
    ("R_{α,d} = R_{−α,d}", relation_symmetry),
    ("Δ-composition", delta_composition),
];
