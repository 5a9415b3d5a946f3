use skirental::experiments::{figure3, figure3_csv, Subfigure};

fn main() -> skirental::Result<()> {
    let sub: Subfigure = std::env::args().nth(1).as_deref().unwrap_or("a").parse()?;
    print!("{}", figure3_csv(&figure3(sub)?));
    Ok(())
}
