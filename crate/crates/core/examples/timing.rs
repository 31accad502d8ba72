use eaqmds::construction::family_a::{emit_params_a, validate_params_a, ParamsA};
use eaqmds::construction::family_b::{emit_params_b, validate_params_b, B0Mode, CaseB, ParamsB};
use eaqmds::construction::{divisors, SearchConfig};
use eaqmds::field::FieldSpec;
use std::time::Instant;

fn main() {
    let q = 13u64;
    let field = FieldSpec::for_q_squared(q).unwrap();
    let search = SearchConfig::default();
    for s in divisors(q + 1) {
        for t in divisors(q - 1) {
            for h in 1..=s / 2 {
                for r in 2..=t / 2 {
                    let p = ParamsA { q, s, t, h, r };
                    if p.n() > 168 || validate_params_a(&p).is_err() { continue; }
                    let d = p.max_d();
                    if d < 1 { continue; }
                    let t0 = Instant::now();
                    let _ = emit_params_a(&field, &p, d, &search).unwrap();
                    eprintln!("A s={s} t={t} h={h} r={r} n={} d={d}: {:?}", p.n(), t0.elapsed());
                }
            }
        }
    }
    for case in [CaseB::Odd, CaseB::EvenLong, CaseB::EvenShort] {
        for s in 1..=(q + 1) / 2 {
            for e in 0..s {
                let p = ParamsB { q, s, e, case };
                if (q + 1) % p.modulus_m() != 0 { continue; }
                if validate_params_b(&p).is_err() || p.n() > 168 { continue; }
                let k = p.k_max();
                if k < 1 { continue; }
                let t0 = Instant::now();
                let _ = emit_params_b(&field, &p, k, B0Mode::ZeroTrace, &search).unwrap();
                eprintln!("B case={case:?} s={s} e={e} n={} k={k}: {:?}", p.n(), t0.elapsed());
            }
        }
    }
}
