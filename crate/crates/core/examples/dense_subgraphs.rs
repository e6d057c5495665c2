//! Greedy path-or-dense walk and the dense block partition.

use cycle_ramsey::dense::{dense_partition, path_or_dense, PathOrDense};
use cycle_ramsey::witness::chvatal_harary;
use cycle_ramsey::Graph;

fn main() -> cycle_ramsey::Result<()> {
    for (name, g) in [("C_30", Graph::cycle(30)), ("K_8", Graph::complete(8))] {
        match path_or_dense(&g, 0, 12)? {
            PathOrDense::Path { path } => println!("{name}: path of length {}", path.len()),
            PathOrDense::Dense {
                vertices, edges, ..
            } => {
                println!(
                    "{name}: stuck on {} vertices with {edges} edges",
                    vertices.len()
                )
            }
        }
    }

    let red = chvatal_harary(9, 4)?.red;
    let p = dense_partition(&red, 9, 0.5)?;
    println!(
        "blocks {:?}, leftover {:?}, guarantee {}",
        p.blocks, p.leftover, p.guarantee_met
    );
    Ok(())
}
