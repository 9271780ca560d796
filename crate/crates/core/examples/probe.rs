use flagforge_core::finoracle::*;
use std::time::Instant;
fn main() {
    for g in [FdLieAlgebra::block_upper(&[3, 3, 3]), FdLieAlgebra::gl(8), FdLieAlgebra::block_upper(&[2,2,2,2])] {
        let t = Instant::now();
        let k = g.killing();
        eprintln!("dim {} killing {:?}", g.dim(), t.elapsed());
        let t = Instant::now();
        let n = linear_nilradical(&g);
        eprintln!("nil dim {} {:?}", n.dim(), t.elapsed());
        let _ = k;
    }
}
