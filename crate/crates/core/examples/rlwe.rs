//! Ring-LWE key generation, single-block encryption and payload blobs.

use pqpt::pqcrypto::{decrypt, decrypt_payload, encrypt, encrypt_payload, keygen, RlweParams};
use pqpt::derive_stream;

fn main() {
    for params in [RlweParams::toy4(), RlweParams::std256(), RlweParams::std512()] {
        println!(
            "{}: n={} q={} eta={} failure bound {:.3e}, correct: {}",
            params.name(),
            params.n(),
            params.q(),
            params.eta(),
            params.decryption_failure_bound(),
            params.is_correct()
        );
    }

    let params = RlweParams::toy4();
    let kp = keygen(&params, &mut derive_stream(1, "keygen")).unwrap();
    let message = [true, false, true, false];
    let ct = encrypt(&kp.public, &params, &message, &mut derive_stream(3, "encrypt")).unwrap();
    println!("\nTOY-4 secret {:?}", kp.secret.centered());
    println!("u = {:?}, v = {:?}", ct.u.coeffs(), ct.v.coeffs());
    println!("decrypted {:?}", decrypt(&kp.secret, &params, &ct).unwrap());

    let params = RlweParams::std256();
    let kp = keygen(&params, &mut derive_stream(7, "keygen")).unwrap();
    let text = b"audit entry: SQL injection on /login resolved";
    let blob = encrypt_payload(&kp.public, &params, text, &mut derive_stream(7, "payload")).unwrap();
    let back = decrypt_payload(&kp.secret, &params, &blob).unwrap();
    println!("\n{} plaintext bytes -> {} byte blob -> {:?}", text.len(), blob.len(), String::from_utf8(back).unwrap());
}
