fn main() {
    // CLI wiring lands after the library layers: see suite module.
    eprintln!("fracmap CLI not assembled yet");
    std::process::exit(2);
}
