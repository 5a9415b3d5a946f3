use skirental::experiments::Table3;

fn main() -> skirental::Result<()> {
    let t = Table3::compute()?;
    print!("{}", t.to_csv());
    Ok(())
}
