//! Exhaustive secret recovery: succeeds on TOY-4, hits the budget on STD-256.

use std::time::Instant;

use num_bigint::BigUint;
use pqpt::derive_stream;
use pqpt::pqcrypto::{encrypt, keygen, keyspace_size, simulate_quantum_attack, AttackOutcome, RlweParams};

fn run(params: RlweParams, budget: u64) {
    let kp = keygen(&params, &mut derive_stream(5, "keygen")).unwrap();
    let mut prng = derive_stream(5, "message");
    let message: Vec<bool> = (0..params.n()).map(|_| prng.next_unit() < 0.5).collect();
    let ct = encrypt(&kp.public, &params, &message, &mut prng).unwrap();

    let start = Instant::now();
    let report = simulate_quantum_attack(&params, &kp.public, &ct, &message, &BigUint::from(budget));
    let digits = report.keyspace_size.to_string().len();
    println!("{}: keyspace {digits} digits, tried {}, {:?}", params.name(), report.keys_tried, start.elapsed());
    match report.outcome {
        AttackOutcome::Recovered { secret } => {
            println!("  recovered {secret:?}, true secret {:?}", kp.secret.centered());
        }
        other => println!("  {other:?}"),
    }
}

fn main() {
    assert_eq!(keyspace_size(&RlweParams::toy4()), BigUint::from(81u32));
    run(RlweParams::toy4(), 1_000);
    run(RlweParams::std256(), 1_000_000);
}
