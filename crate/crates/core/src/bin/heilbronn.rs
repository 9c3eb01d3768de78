fn main() {
    heilbronn::cli::main()
}
