//! Prints codewords for levels 0..=8 under each encoding, then the same
//! table as CSV.

use qudit_route::codes::{write_table_csv, CompactCode, EncodingScheme};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = 9;
    let schemes = vec![
        EncodingScheme::std_binary(d)?,
        EncodingScheme::gray(d)?,
        EncodingScheme::unary(d)?,
        EncodingScheme::block_unary(d, 3, CompactCode::StdBinary)?,
        EncodingScheme::block_unary(d, 3, CompactCode::Gray)?,
    ];

    print!("{:>3}", "l");
    for s in &schemes {
        print!("  {:>10}", s.encoding().token());
    }
    println!();
    for l in 0..d {
        print!("{l:>3}");
        for s in &schemes {
            print!("  {:>10}", s.encode(l)?.to_string());
        }
        println!();
    }

    println!();
    write_table_csv(&schemes, d, std::io::stdout())?;
    Ok(())
}
