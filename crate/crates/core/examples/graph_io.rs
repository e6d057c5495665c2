//! Edge-list and graph6 round trips.

use cycle_ramsey::io::{parse_edge_list, parse_graph6, to_edge_list, to_graph6};
use cycle_ramsey::Graph;

fn main() -> cycle_ramsey::Result<()> {
    let g = Graph::petersen();
    let text = to_edge_list(&g);
    println!("{}", text.lines().take(4).collect::<Vec<_>>().join("\n"));
    assert_eq!(parse_edge_list(&text)?, g);

    let g6 = to_graph6(&g);
    println!("graph6: {g6}");
    assert_eq!(parse_graph6(&g6)?, g);
    println!("K_5 as graph6: {}", to_graph6(&Graph::complete(5)));
    Ok(())
}
