from bodymeasure.main import main

main()
