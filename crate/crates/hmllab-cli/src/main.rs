fn main() {
    println!("hmllab placeholder");
}
