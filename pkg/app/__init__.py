# Lie grading toolkit
