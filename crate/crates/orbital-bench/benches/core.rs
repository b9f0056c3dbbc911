use criterion::{criterion_group, criterion_main, Criterion};
use orbital_core::bruteforce::{enumerate_truncated_fiber, SplitGamma};
use orbital_core::cox::CoxRing;
use orbital_core::endoscopy::FiniteOrderTorusPoint;
use orbital_core::fan::{Fan, TorusDivisor};
use orbital_core::field::{int, rat};
use orbital_core::finite_field::GaloisField;
use orbital_core::orbital::fundamental_lemma_check;
use orbital_core::rootdata::{Levi, RootDatum};
use orbital_core::springer::{SpringerModule, ValuationProfile};

fn springer_homology(c: &mut Criterion) {
    let sl2 = RootDatum::sl(2);
    let fan = Fan::new(&sl2, &Levi::torus());
    let profile = ValuationProfile::constant(&sl2, 3);
    let divisor = TorusDivisor::from_integers(&[3, 3]);
    c.bench_function("sl2 ordinary homology d=3 m=6", |b| {
        b.iter(|| {
            SpringerModule::new(&fan, &divisor, &profile, &[0])
                .and_then(|m| m.ordinary_homology())
                .unwrap()
        })
    });

    let sl3 = RootDatum::sl(3);
    let fan = Fan::new(&sl3, &Levi::torus());
    let profile = ValuationProfile::constant(&sl3, 1);
    let divisor = TorusDivisor::from_integers(&[2; 6]);
    c.bench_function("sl3 ordinary homology 2ΣD", |b| {
        b.iter(|| {
            SpringerModule::new(&fan, &divisor, &profile, &[0, 1, 2])
                .and_then(|m| m.ordinary_homology())
                .unwrap()
        })
    });
}

fn toric_cohomology(c: &mut Criterion) {
    let sl3 = RootDatum::sl(3);
    let fan = Fan::new(&sl3, &Levi::torus());
    let cox = CoxRing::new(&fan);
    let divisor = TorusDivisor::from_integers(&[-2, 1, -2, 1, -2, 1]);
    c.bench_function("sl3 toric cohomology", |b| b.iter(|| cox.sheaf_cohomology(&divisor).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let sl2 = RootDatum::sl(2);
    let fan = Fan::new(&sl2, &Levi::torus());
    let field = GaloisField::new(7).unwrap();
    let gamma = SplitGamma { factors: vec![(2, 1)] };
    let divisor = TorusDivisor::from_integers(&[2, 2]);
    c.bench_function("sl2 enumeration q=7 d=2 m=4", |b| {
        b.iter(|| enumerate_truncated_fiber(&fan, &gamma, &divisor, &field).unwrap().count())
    });
}

fn identity(c: &mut Criterion) {
    let g = RootDatum::product(&[RootDatum::sl(2), RootDatum::sl(2)]);
    let fan = Fan::new(&g, &g.standard_levi(&[1]).unwrap());
    let profile = ValuationProfile::constant(&g, 1);
    let s = FiniteOrderTorusPoint::new(vec![int(0), rat(1, 2)]);
    let family = [TorusDivisor::from_integers(&[2, 2])];
    c.bench_function("sl2xsl2 endoscopic identity", |b| {
        b.iter(|| fundamental_lemma_check(&fan, &profile, &s, &family, None).unwrap())
    });
}

criterion_group!(benches, springer_homology, toric_cohomology, enumeration, identity);
criterion_main!(benches);
