//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands.
//!
//! 15-point Kronrod rule with embedded 7-point Gauss rule, bisection of the
//! worst interval until the summed error estimate drops below an absolute
//! tolerance. Break points may be supplied to pre-split the window at known
//! integrand features.

use num_complex::Complex64;

use crate::error::{Error, Result};

// Abscissae and weights of the (7, 15) Gauss-Kronrod pair on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// One Kronrod evaluation over [a, b]: returns (integral, error estimate).
fn qk15<F>(f: &F, a: f64, b: f64) -> (Complex64, f64)
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let integral = kronrod * half;
    // |K - G| estimates the error of the embedded Gauss rule and therefore
    // bounds the Kronrod result conservatively.
    let err = ((kronrod - gauss) * half).norm();
    (integral, err)
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// Integrate `f` over [a, b] to absolute tolerance `tol_abs`, pre-splitting
/// at the supplied interior break points.
pub fn integrate<F>(
    f: F,
    a: f64,
    b: f64,
    break_points: &[f64],
    tol_abs: f64,
    max_segments: usize,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut edges: Vec<f64> = Vec::with_capacity(break_points.len() + 2);
    edges.push(a);
    for &p in break_points {
        if p > a && p < b {
            edges.push(p);
        }
    }
    edges.push(b);
    edges.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.dedup();

    let mut segments: Vec<Segment> = edges
        .windows(2)
        .map(|w| {
            let (value, error) = qk15(&f, w[0], w[1]);
            Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();

    loop {
        let total_err: f64 = segments.iter().map(|s| s.error).sum();
        if total_err <= tol_abs {
            break;
        }
        if segments.len() >= max_segments {
            return Err(Error::Numerical {
                context: "adaptive quadrature ran out of subdivisions".into(),
                achieved: total_err,
                requested: tol_abs,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval collapsed to machine precision: keep its estimate
            segments.push(seg);
            let stuck: f64 = segments.iter().map(|s| s.error).sum();
            if stuck
                > segments
                    .iter()
                    .map(|s| s.value.norm())
                    .sum::<f64>()
                    .max(tol_abs)
            {
                return Err(Error::Numerical {
                    context: "quadrature interval collapsed before convergence".into(),
                    achieved: stuck,
                    requested: tol_abs,
                });
            }
            break;
        }
        let (v1, e1) = qk15(&f, seg.a, mid);
        let (v2, e2) = qk15(&f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
        });
    }

    Ok(segments.iter().map(|s| s.value).sum())
}
