fn main() {
    // CLI wiring lands after the library is in place.
}
