//! Reading and writing edge lists and partitions, with labelled nodes.

use netscale::coarse::causal_emergence;
use netscale::io::{format_edge_list, format_partition, parse_edge_list, parse_partition};

const TEXT: &str = "\
# a small labelled network
\"a\"\t\"b\"\t1
\"b\"\t\"c\"\t1
\"c\"\t\"c\"\t1
\"d\"\t\"c\"
";

fn main() -> netscale::error::Result<()> {
    let net = parse_edge_list(TEXT)?.normalize();
    print!("{}", format_edge_list(&net));

    let part = parse_partition("\"a\" \"d\"\n\"b\"\n\"c\"\n", &net)?;
    print!("partition:\n{}", format_partition(&part, &net));
    let r = causal_emergence(&net, &part)?;
    println!("emergence {:.4}", r.causal_emergence);
    Ok(())
}
