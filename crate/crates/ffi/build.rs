fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").unwrap();

    cbindgen::Builder::new()
        .with_config(
            cbindgen::Config::from_file(format!("{crate_dir}/cbindgen.toml"))
                .expect("read cbindgen.toml"),
        )
        .with_crate(&crate_dir)
        .generate()
        .expect("generate C header")
        .write_to_file(format!("{crate_dir}/include/natopt.h"));

    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
}
