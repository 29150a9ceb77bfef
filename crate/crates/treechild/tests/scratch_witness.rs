use treechild::classify::{enumerate_rooted_tree_child, find_greedy_stall_witness};
use treechild::io::{serialize_rooted, serialize_unrooted};
use treechild::Network;

#[test]
fn scratch_find_stall() {
    for (leaves, rets) in [(6, 4), (7, 4)] {
        let t0 = std::time::Instant::now();
        let n = enumerate_rooted_tree_child(leaves, rets).len();
        println!("rooted tree-child ({leaves},{rets}): {n} shapes in {:?}", t0.elapsed());
        let t0 = std::time::Instant::now();
        match find_greedy_stall_witness(leaves, rets, 1_000_000) {
            Some((u, stall, r)) => {
                println!("STALL WITNESS at ({leaves},{rets}) in {:?}:", t0.elapsed());
                println!("network:\n{}", serialize_unrooted(&u));
                println!("leaves={} r={}", u.leaf_count(), u.reticulation_number());
                println!("stalling sequence: {stall} (len {})", stall.len());
                println!("orientation: {}", serialize_rooted(&r));
                return;
            }
            None => println!("no stall witness at ({leaves},{rets}) after {:?}", t0.elapsed()),
        }
    }
}
