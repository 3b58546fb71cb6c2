fn main() {
    #[cfg(feature = "gen_h")]
    {
        let dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();
        let config = cbindgen::Config::from_file(format!("{dir}/cbindgen.toml")).expect("cbindgen.toml");
        cbindgen::generate_with_config(&dir, config)
            .expect("header generation")
            .write_to_file(format!("{dir}/include/ssvsc.h"));
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
