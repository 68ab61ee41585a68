//! The obstruction certificate on a small hand-made basis, then with the
//! one fact that breaks it.

use hfkcert::complex::Bidegree;
use hfkcert::f2::F2Matrix;
use hfkcert::involutive::{obstruction_certificate, verify_certificate, Fact, FactKind, HatBasisData, StructuralTag};

fn main() {
    let basis = ["v1", "v2", "w", "y"].iter().map(|n| (n.to_string(), Bidegree::default())).collect();
    let mut phi = F2Matrix::zeros(4, 4);
    phi.set(3, 1, true); // phi(v2) = y
    let facts = vec![
        Fact::structural(FactKind::PsiKillsV1, StructuralTag::FreeSummand, vec![]),
        Fact::structural(FactKind::V1NotInImPsi, StructuralTag::FreeSummand, vec![]),
        Fact::structural(FactKind::IotaFixesV1, StructuralTag::UniqueBidegree, vec![]),
        Fact::structural(FactKind::IotaFixesV2, StructuralTag::UniqueBidegree, vec![]),
    ];
    let mut b = HatBasisData::new(basis, 0, 1, phi.clone(), None, None, facts.clone()).unwrap();
    b.add_computed_phi_facts();
    let cert = obstruction_certificate(&b);
    println!("{}replays: {}", cert.render_text(), verify_certificate(&cert));

    // phi(w) = v2 defeats the slot-4 discharge
    phi.set(1, 2, true);
    let mut bad = HatBasisData::new(b.basis.clone(), 0, 1, phi, None, None, facts).unwrap();
    bad.add_computed_phi_facts();
    let cert = obstruction_certificate(&bad);
    println!("with phi(w) = v2: {} at {}", cert.overall.label(), cert.first_failure().unwrap().id);
}
