//! Composition steps: expansion, adding and removing a dimension, and
//! shrinking, each followed by verification.
//!
//! cargo run --example compose

use goodbox::constructions::{
    add_dimension, apply_expansion, expansion_ex, remove_dimension, shrink,
};
use goodbox::{verify_skeleton, Skeleton};

fn show(step: &str, s: &Skeleton) {
    println!(
        "{step:<24} {} ({} points, {:?})",
        s.shape(),
        s.len(),
        verify_skeleton(s)
    );
}

fn main() -> goodbox::Result<()> {
    let mut s = Skeleton::unit();
    show("start", &s);
    s = apply_expansion(&s, 0, &expansion_ex(1))?;
    show("expand coord 0 by ex(1)", &s);
    s = apply_expansion(&s, 0, &expansion_ex(2))?;
    show("expand coord 0 by ex(2)", &s);
    s = add_dimension(&s, 9)?;
    show("add dimension 9", &s);
    s = remove_dimension(&s, 3)?;
    show("remove dimension 3", &s);
    s = shrink(&s, 2)?;
    show("shrink coord 2", &s);
    Ok(())
}
