//! Reading and writing arc lists and attribute tables.

use ergm_ee::attributes::AttributeKind;
use ergm_ee::io::{parse_arclist, parse_attributes, write_arclist, write_attributes};

const NETWORK: &str = "\
% a five node example
*vertices 5
*arcs
1 2
2 1
2 3
4 3
5 1
";

const ATTRIBUTES: &str = "\
region  dept
north   sales
south   NA
north   sales
east    ops
south   ops
";

fn main() -> ergm_ee::Result<()> {
    let g = parse_arclist(NETWORK, "network")?;
    println!("{} nodes, {} arcs", g.num_nodes(), g.num_arcs());
    let attrs = parse_attributes(ATTRIBUTES, AttributeKind::Categorical, g.num_nodes(), "attributes")?;
    for c in &attrs.categorical {
        println!("{}: {:?} ({} categories)", c.name, c.values, c.num_categories);
    }

    let mut out = Vec::new();
    write_arclist(&g, &mut out).expect("write to memory");
    write_attributes(&attrs, AttributeKind::Categorical, &mut out).expect("write to memory");
    print!("{}", String::from_utf8_lossy(&out));

    match parse_arclist("*vertices 3\n*arcs\n1 2\n3 3\n", "bad") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
