from sqpack.main import main

main()
